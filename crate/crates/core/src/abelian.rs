//! Structure and dual of a finite abelian group given by its
//! multiplication law.
//!
//! The group is presented polycyclically: scanning the elements in a
//! deterministic order, each element not yet in the span becomes a new
//! generator `g_i` with relative order `e_i` (the least `e ≥ 1` with
//! `g_i^e` in the previous span). Every element then has a unique normal
//! form `∏ g_i^{a_i}` with `0 ≤ a_i < e_i`, and a character is determined
//! by compatible root-of-unity values on the generators. Characters are
//! enumerated exactly once each, in a deterministic order.

/// Polycyclic data for a finite abelian group on positions `0..size`.
#[derive(Debug, Clone)]
pub struct AbelianStructure {
    pub size: usize,
    /// Positions of the polycyclic generators.
    pub gens: Vec<usize>,
    /// Relative orders `e_i`.
    pub rel_orders: Vec<u64>,
    /// Normal form of `g_i^{e_i}` over the generators before `g_i`.
    pub power_nf: Vec<Vec<u64>>,
    /// Normal form of every element, length `gens.len()` each.
    pub nf: Vec<Vec<u64>>,
    /// Exponent of the group (lcm of element orders).
    pub exponent: u64,
}

/// Analyses an abelian group. `mul` must be a total, associative,
/// commutative law on `0..size` with the given identity.
pub fn analyze<M: Fn(usize, usize) -> usize>(
    size: usize,
    identity: usize,
    mul: M,
) -> AbelianStructure {
    let mut nf: Vec<Option<Vec<u64>>> = vec![None; size];
    nf[identity] = Some(Vec::new());
    let mut members: Vec<usize> = vec![identity];
    let mut gens = Vec::new();
    let mut rel_orders = Vec::new();
    let mut power_nf = Vec::new();

    for cand in 0..size {
        if nf[cand].is_some() {
            continue;
        }
        let g = cand;
        // Least e ≥ 1 with g^e in the current span.
        let mut e = 1u64;
        let mut pow = g;
        while nf[pow].is_none() {
            pow = mul(pow, g);
            e += 1;
        }
        let mut pnf = nf[pow].clone().unwrap();
        pnf.resize(gens.len(), 0);
        power_nf.push(pnf);

        let current = members.clone();
        for &s in &current {
            let mut cur = s;
            for a in 1..e {
                cur = mul(cur, g);
                debug_assert!(nf[cur].is_none(), "span extension must be free");
                let mut v = nf[s].clone().unwrap();
                v.resize(gens.len(), 0);
                v.push(a);
                nf[cur] = Some(v);
                members.push(cur);
            }
        }
        gens.push(g);
        rel_orders.push(e);
    }
    assert_eq!(members.len(), size, "group order must equal the span size");

    let t = gens.len();
    let nf: Vec<Vec<u64>> = nf
        .into_iter()
        .map(|v| {
            let mut v = v.expect("every element must be reached");
            v.resize(t, 0);
            v
        })
        .collect();

    // Exponent: lcm of generator orders.
    let mut exponent = 1u64;
    for &g in &gens {
        let mut ord = 1u64;
        let mut cur = g;
        while cur != identity {
            cur = mul(cur, g);
            ord += 1;
        }
        exponent = lcm(exponent, ord);
    }

    AbelianStructure { size, gens, rel_orders, power_nf, nf, exponent }
}

impl AbelianStructure {
    /// Exponent of `χ(element)` as a power of `ζ_exponent`, for the
    /// character with generator exponents `zs`.
    pub fn eval(&self, zs: &[u64], pos: usize) -> u64 {
        let m = self.exponent;
        self.nf[pos]
            .iter()
            .zip(zs)
            .fold(0u64, |acc, (&a, &z)| (acc + a % m * (z % m)) % m)
    }

    /// All characters, as exponent vectors on the generators with values
    /// in `Z/exponent`. Deterministic order; exactly `size` of them.
    pub fn dual(&self) -> Vec<Vec<u64>> {
        let m = self.exponent;
        let mut chars: Vec<Vec<u64>> = vec![Vec::new()];
        for i in 0..self.gens.len() {
            let e = self.rel_orders[i];
            debug_assert_eq!(m % e, 0);
            let mut next = Vec::with_capacity(chars.len() * e as usize);
            for partial in &chars {
                // χ(g_i)^e must equal χ(g_i^e).
                let target = self.eval_partial(partial, &self.power_nf[i]);
                debug_assert_eq!(target % e, 0, "character extension is always solvable");
                let base = target / e;
                for t in 0..e {
                    let mut v = partial.clone();
                    v.push((base + t * (m / e)) % m);
                    next.push(v);
                }
            }
            chars = next;
        }
        assert_eq!(chars.len(), self.size);
        chars
    }

    fn eval_partial(&self, zs: &[u64], word: &[u64]) -> u64 {
        let m = self.exponent;
        word.iter()
            .zip(zs)
            .fold(0u64, |acc, (&a, &z)| (acc + a % m * (z % m)) % m)
    }

    /// Order of the character with generator exponents `zs`.
    pub fn char_order(&self, zs: &[u64]) -> u64 {
        let m = self.exponent;
        zs.iter()
            .map(|&z| m / gcd(m, z))
            .fold(1u64, lcm)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

//! Finite-group character machinery: induction, restriction, double
//! cosets, Mackey decomposition, Frobenius determinants on induced
//! representations, Euler-factor inductivity and the sign ledger.
//!
//! Groups are small (|G| ≤ 64, axioms verified at construction) and all
//! character values are exact cyclotomic integers. Class functions are
//! stored per element; constancy on conjugacy classes is an invariant,
//! not an encoding assumption.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian;
use crate::cyclo::CyclotomicInt;
use crate::poly::{EulerPoly, FactoredPoly};
use crate::{Error, Result};

/// A finite group by its Cayley table on `0..order`, with identity `0`.
#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn from_cayley(name: &str, mul: Vec<Vec<usize>>) -> Result<Arc<Self>> {
        let order = mul.len();
        if order == 0 || order > 64 {
            return Err(Error::Config(format!(
                "group order {order} outside the supported range 1..=64"
            )));
        }
        // Identity must be element 0.
        for g in 0..order {
            if mul[0][g] != g || mul[g][0] != g {
                return Err(Error::Config("element 0 must be the identity".into()));
            }
        }
        // Associativity and inverses.
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a][b] == 0 {
                    inv[a] = b;
                }
                for c in 0..order {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Config("multiplication is not associative".into()));
                    }
                }
            }
        }
        if inv.iter().any(|&i| i == usize::MAX) {
            return Err(Error::Config("some element has no inverse".into()));
        }
        // Conjugacy classes by orbit refinement, ordered by least element.
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for x in 0..order {
                orbit.insert(mul[mul[x][g]][inv[x]]);
            }
            let id = classes.len();
            for &h in &orbit {
                class_of[h] = id;
            }
            classes.push(orbit.into_iter().collect());
        }
        Ok(Arc::new(FiniteGroup { name: name.to_string(), order, mul, inv, class_of, classes }))
    }

    /// Closure of permutations under composition; elements are indexed in
    /// lexicographic order of their one-line notation.
    pub fn from_perm_gens(name: &str, degree: usize, gens: &[Vec<usize>]) -> Result<Arc<Self>> {
        let identity: Vec<usize> = (0..degree).collect();
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        set.insert(identity.clone());
        let mut frontier = vec![identity];
        while let Some(p) = frontier.pop() {
            for g in gens {
                if g.len() != degree {
                    return Err(Error::Config("generator degree mismatch".into()));
                }
                let q: Vec<usize> = (0..degree).map(|x| g[p[x]]).collect();
                if set.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let perms: Vec<Vec<usize>> = set.into_iter().collect();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let order = perms.len();
        let mut mul = vec![vec![0usize; order]; order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let q: Vec<usize> = (0..degree).map(|x| pa[pb[x]]).collect();
                mul[a][b] = index(&q);
            }
        }
        // Re-root so the identity sits at index 0.
        let id_idx = index(&(0..degree).collect());
        if id_idx != 0 {
            // The identity is lexicographically least, so this cannot
            // happen; keep the check as an invariant.
            return Err(Error::Config("identity must be the least permutation".into()));
        }
        Self::from_cayley(name, mul)
    }

    pub fn cyclic(n: usize) -> Arc<Self> {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(&format!("C{n}"), mul).expect("cyclic groups are groups")
    }

    pub fn klein4() -> Arc<Self> {
        let mul = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::from_cayley("V4", mul).expect("V4 is a group")
    }

    pub fn s3() -> Arc<Self> {
        Self::from_perm_gens("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    pub fn d4() -> Arc<Self> {
        Self::from_perm_gens("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4")
    }

    pub fn a4() -> Arc<Self> {
        Self::from_perm_gens("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    pub fn s4() -> Arc<Self> {
        Self::from_perm_gens("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).expect("S4")
    }

    pub fn q8() -> Arc<Self> {
        // 0:+1 1:+i 2:+j 3:+k 4:-1 5:-i 6:-j 7:-k
        let axis_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) => (x, false),
                (x, 0) => (x, false),
                (1, 1) | (2, 2) | (3, 3) => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mul: Vec<Vec<usize>> = (0..8)
            .map(|x: usize| {
                (0..8)
                    .map(|y: usize| {
                        let (sa, aa) = (x >= 4, x % 4);
                        let (sb, ab) = (y >= 4, y % 4);
                        let (axis, neg) = axis_mul(aa, ab);
                        let sign = (sa ^ sb) ^ neg;
                        axis + if sign { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley("Q8", mul).expect("Q8 is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        // g x g^{-1}
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut ord = 1;
        let mut cur = g;
        while cur != 0 {
            cur = self.mul(cur, g);
            ord += 1;
        }
        ord
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// Subgroup generated by a set, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(0usize);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// The full subgroup lattice, deterministically ordered by
    /// (order, elements).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(vec![0]);
        let mut frontier = vec![vec![0usize]];
        while let Some(h) = frontier.pop() {
            for g in 1..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let new = self.closure(&gens);
                if seen.insert(new.clone()) {
                    frontier.push(new);
                }
            }
        }
        let mut subs: Vec<Vec<usize>> = seen.into_iter().collect();
        subs.sort_by_key(|s| (s.len(), s.clone()));
        subs
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        set.contains(&0)
            && h.iter()
                .all(|&a| h.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Left coset representatives of `h` in `g`, least element first.
    pub fn left_coset_reps(&self, h: &[usize]) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for &hh in h {
                covered[self.mul(x, hh)] = true;
            }
        }
        reps
    }

    /// Double coset representatives of `H\G/D`, least element first.
    pub fn double_cosets(&self, h: &[usize], d: &[usize]) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &a in h {
                for &b in d {
                    covered[self.mul(self.mul(a, g), b)] = true;
                }
            }
        }
        reps
    }
}

/// An abelian (degree-1) character of a subgroup, with values in
/// `μ_m`; stored densely over the whole group.
#[derive(Clone, Debug)]
pub struct AbChar {
    /// Order of the value group.
    pub m: u64,
    exp: Vec<Option<u64>>,
}

impl AbChar {
    pub fn trivial(group: &FiniteGroup, h: &[usize]) -> Self {
        let mut exp = vec![None; group.order()];
        for &x in h {
            exp[x] = Some(0);
        }
        AbChar { m: 1, exp }
    }

    pub fn domain(&self) -> Vec<usize> {
        self.exp
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|_| i))
            .collect()
    }

    pub fn eval_exponent(&self, g: usize) -> Option<u64> {
        self.exp[g]
    }

    pub fn eval_in(&self, g: usize, ambient: u64) -> Option<CyclotomicInt> {
        debug_assert_eq!(ambient % self.m, 0);
        self.exp[g].map(|v| CyclotomicInt::root(ambient, (v * (ambient / self.m)) as i64))
    }

    /// `ψ^g(x) = ψ(g x g^{-1})`, a character of `H^g = g^{-1} H g`.
    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> AbChar {
        let mut exp = vec![None; group.order()];
        for x in 0..group.order() {
            exp[x] = self.exp[group.conj(g, x)];
        }
        AbChar { m: self.m, exp }
    }

    pub fn inverse(&self) -> AbChar {
        AbChar {
            m: self.m,
            exp: self
                .exp
                .iter()
                .map(|e| e.map(|v| (self.m - v % self.m) % self.m))
                .collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.exp
            .iter()
            .flatten()
            .map(|&v| self.m / abelian::gcd(self.m, v))
            .fold(1, abelian::lcm)
    }
}

/// All degree-1 characters of the subgroup `h`, i.e. characters of its
/// abelianisation, in a deterministic order.
pub fn abelian_characters(group: &FiniteGroup, h: &[usize]) -> Vec<AbChar> {
    // Derived subgroup of H.
    let mut comms = Vec::new();
    for &a in h {
        for &b in h {
            comms.push(group.mul(
                group.mul(a, b),
                group.mul(group.inv(a), group.inv(b)),
            ));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    let derived = group.closure(&comms);
    let derived_set: BTreeSet<usize> = derived.iter().copied().collect();

    // Cosets of the derived subgroup inside H, by least representative.
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for &x in h {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        for &d in &derived_set {
            coset_of[group.mul(x, d)] = id;
        }
        reps.push(x);
    }
    let quot_mul = |a: usize, b: usize| coset_of[group.mul(reps[a], reps[b])];
    let st = abelian::analyze(reps.len(), coset_of[0], quot_mul);
    st.dual()
        .into_iter()
        .map(|zs| {
            let mut exp = vec![None; group.order()];
            for &x in h {
                exp[x] = Some(st.eval(&zs, coset_of[x]));
            }
            AbChar { m: st.exponent, exp }
        })
        .collect()
}

/// A class function on a group, with exact cyclotomic values stored per
/// element (constancy on classes is checked, not assumed).
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub group: Arc<FiniteGroup>,
    pub m: u64,
    values: Vec<CyclotomicInt>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.values == other.values
    }
}

impl ClassFunction {
    pub fn zero(group: &Arc<FiniteGroup>, m: u64) -> Self {
        ClassFunction {
            group: group.clone(),
            m,
            values: vec![CyclotomicInt::zero(m); group.order()],
        }
    }

    pub fn from_values(group: &Arc<FiniteGroup>, m: u64, values: Vec<CyclotomicInt>) -> Self {
        assert_eq!(values.len(), group.order());
        ClassFunction { group: group.clone(), m, values }
    }

    pub fn value(&self, g: usize) -> &CyclotomicInt {
        &self.values[g]
    }

    pub fn values(&self) -> &[CyclotomicInt] {
        &self.values
    }

    pub fn is_class_function(&self) -> bool {
        self.group
            .classes()
            .iter()
            .all(|cls| cls.iter().all(|&g| self.values[g] == self.values[cls[0]]))
    }

    /// One value per conjugacy class.
    pub fn class_values(&self) -> Vec<CyclotomicInt> {
        self.group
            .classes()
            .iter()
            .map(|cls| self.values[cls[0]].clone())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.group, &other.group) && self.m == other.m);
        ClassFunction {
            group: self.group.clone(),
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        ClassFunction {
            group: self.group.clone(),
            m: self.m,
            values: self.values.iter().map(|v| v.scale(&BigInt::from(c))).collect(),
        }
    }

    /// Degree = value at the identity, when it is a rational integer.
    pub fn degree(&self) -> Option<BigInt> {
        let coeffs = self.values[0].to_power_coeffs();
        if coeffs[1..].iter().all(|c| c == &BigInt::from(0)) {
            Some(coeffs[0].clone())
        } else {
            None
        }
    }
}

/// Induced values of `ψ` from `sub` up to `universe` (both subgroups of
/// `group`, with `sub ⊆ universe`), indexed by position in `universe`.
fn induce_values(
    group: &FiniteGroup,
    universe: &[usize],
    sub: &[usize],
    psi: &AbChar,
    ambient: u64,
) -> Vec<CyclotomicInt> {
    let sub_set: BTreeSet<usize> = sub.iter().copied().collect();
    // Left coset reps of sub inside universe.
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut reps = Vec::new();
    for &x in universe {
        if covered.contains(&x) {
            continue;
        }
        reps.push(x);
        for &s in sub {
            covered.insert(group.mul(x, s));
        }
    }
    universe
        .iter()
        .map(|&g| {
            let mut acc = CyclotomicInt::zero(ambient);
            for &x in &reps {
                let t = group.mul(group.mul(group.inv(x), g), x);
                if sub_set.contains(&t) {
                    acc = acc.add(&psi.eval_in(t, ambient).expect("t lies in sub"));
                }
            }
            acc
        })
        .collect()
}

/// `Ind_H^G ψ` as a class function on `G`.
pub fn induce(group: &Arc<FiniteGroup>, h: &[usize], psi: &AbChar, ambient: u64) -> ClassFunction {
    let all: Vec<usize> = (0..group.order()).collect();
    let values = induce_values(group, &all, h, psi, ambient);
    ClassFunction::from_values(group, ambient, values)
}

/// Restriction of a class function to a subgroup, indexed by position in
/// `d`.
pub fn restrict(cf: &ClassFunction, d: &[usize]) -> Vec<CyclotomicInt> {
    d.iter().map(|&g| cf.value(g).clone()).collect()
}

/// Frobenius reciprocity `⟨Ind ψ, χ⟩_G = ⟨ψ, Res χ⟩_H`, checked in the
/// cross-multiplied integral form `|H| Σ_G = |G| Σ_H`.
pub fn frobenius_reciprocity_holds(
    group: &Arc<FiniteGroup>,
    h: &[usize],
    psi: &AbChar,
    chi: &ClassFunction,
) -> bool {
    let ambient = abelian::lcm(chi.m, psi.m);
    let ind = induce(group, h, psi, ambient);
    let mut lhs = CyclotomicInt::zero(ambient);
    for g in 0..group.order() {
        lhs = lhs.add(
            &ind.value(g)
                .mul(&chi.value(g).embed(ambient).expect("m divides ambient").conj()),
        );
    }
    let mut rhs = CyclotomicInt::zero(ambient);
    for &x in h {
        rhs = rhs.add(
            &psi
                .eval_in(x, ambient)
                .expect("x lies in h")
                .mul(&chi.value(x).embed(ambient).expect("m divides ambient").conj()),
        );
    }
    lhs.scale(&BigInt::from(h.len() as i64)) == rhs.scale(&BigInt::from(group.order() as i64))
}

/// Outcome of one Mackey decomposition check.
#[derive(Debug)]
pub struct MackeyCheck {
    pub pass: bool,
    pub double_coset_reps: Vec<usize>,
    pub lhs: Vec<CyclotomicInt>,
    pub rhs: Vec<CyclotomicInt>,
}

/// Verifies `Res_D Ind_H^G ψ = Σ_{[g] ∈ H\G/D} Ind_{H^g ∩ D}^D ψ^g`.
pub fn mackey_check(
    group: &Arc<FiniteGroup>,
    h: &[usize],
    psi: &AbChar,
    d: &[usize],
    ambient: u64,
) -> MackeyCheck {
    let lhs = restrict(&induce(group, h, psi, ambient), d);
    let reps = group.double_cosets(h, d);
    let mut rhs = vec![CyclotomicInt::zero(ambient); d.len()];
    for &g in &reps {
        // H^g = g^{-1} H g intersected with D.
        let hg: BTreeSet<usize> = h
            .iter()
            .map(|&x| group.mul(group.mul(group.inv(g), x), g))
            .collect();
        let inter: Vec<usize> = d.iter().copied().filter(|x| hg.contains(x)).collect();
        let psi_g = psi.conjugate(group, g);
        let part = induce_values(group, d, &inter, &psi_g, ambient);
        for (acc, v) in rhs.iter_mut().zip(part) {
            *acc = acc.add(&v);
        }
    }
    let pass = lhs == rhs;
    MackeyCheck { pass, double_coset_reps: reps, lhs, rhs }
}

// ---- matrices over Z[ζ_m] and determinants ---------------------------------

pub type CycloMatrix = Vec<Vec<CyclotomicInt>>;

pub fn mat_mul(a: &CycloMatrix, b: &CycloMatrix) -> CycloMatrix {
    let n = a.len();
    let m = a[0][0].conductor();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = CyclotomicInt::zero(m);
                    for (k, row) in b.iter().enumerate() {
                        if !a[i][k].is_zero() && !row[j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&row[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_pow(a: &CycloMatrix, e: u64) -> CycloMatrix {
    let n = a.len();
    let m = a[0][0].conductor();
    let mut acc: CycloMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CyclotomicInt::one(m)
                    } else {
                        CyclotomicInt::zero(m)
                    }
                })
                .collect()
        })
        .collect();
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Exact determinant by column-subset dynamic programming; fine for the
/// small matrices used here (dimension ≤ 10).
pub fn det_cyclo(mat: &CycloMatrix) -> CyclotomicInt {
    let n = mat.len();
    let m = mat[0][0].conductor();
    assert!(n <= 16, "exact determinant DP is for small matrices");
    let mut dp: Vec<Option<CyclotomicInt>> = vec![None; 1 << n];
    dp[0] = Some(CyclotomicInt::one(m));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].clone() else { continue };
        if cur.is_zero() && mask != 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        let mut sign_flips = 0u32;
        for c in 0..n {
            if mask & (1 << c) != 0 {
                sign_flips += 1;
                continue;
            }
            if mat[row][c].is_zero() {
                continue;
            }
            // Parity of used columns to the left of c gives the sign.
            let used_left = sign_flips;
            let term = cur.mul(&mat[row][c]);
            let term = if (row as u32 + used_left) % 2 == 1 {
                term.neg()
            } else {
                term
            };
            let entry = dp[mask | (1 << c)].take();
            dp[mask | (1 << c)] = Some(match entry {
                None => term,
                Some(v) => v.add(&term),
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| CyclotomicInt::zero(m))
}

/// Frobenius determinant on an induced representation: the explicit
/// `f × f` monomial matrix raised to the `e`-th power, against the
/// closed form `((-1)^{f-1} ψ(Frob^f))^e`.
#[derive(Debug, Clone)]
pub struct FrobDet {
    pub matrix_det: CyclotomicInt,
    pub closed_form: CyclotomicInt,
    pub pass: bool,
}

pub fn frob_det_induced(f: usize, e: u64, psi_val: &CyclotomicInt) -> FrobDet {
    let m = psi_val.conductor();
    let one = CyclotomicInt::one(m);
    let zero = CyclotomicInt::zero(m);
    let mut mat: CycloMatrix = vec![vec![zero.clone(); f]; f];
    mat[0][f - 1] = psi_val.clone();
    for i in 1..f {
        mat[i][i - 1] = one.clone();
    }
    let powered = mat_pow(&mat, e);
    let matrix_det = det_cyclo(&powered);
    let mut closed = psi_val.clone();
    if (f - 1) % 2 == 1 {
        closed = closed.neg();
    }
    let closed_form = closed.pow(e);
    let pass = matrix_det == closed_form;
    FrobDet { matrix_det, closed_form, pass }
}

// ---- virtual induction records and Euler inductivity -----------------------

/// One `a_j · Ind_{H_j}^G ψ_j` term.
#[derive(Clone, Debug)]
pub struct RecordTerm {
    pub coeff: i64,
    pub subgroup: Vec<usize>,
    pub character: AbChar,
}

/// A Brauer-style virtual decomposition `target = Σ_j a_j Ind ψ_j`,
/// verified rather than discovered.
#[derive(Clone, Debug)]
pub struct VirtualInductionRecord {
    pub group: Arc<FiniteGroup>,
    pub ambient: u64,
    pub terms: Vec<RecordTerm>,
    pub target: ClassFunction,
}

impl VirtualInductionRecord {
    /// Builds a record whose target is the formal sum of its terms.
    pub fn from_terms(group: &Arc<FiniteGroup>, ambient: u64, terms: Vec<RecordTerm>) -> Self {
        let mut target = ClassFunction::zero(group, ambient);
        for t in &terms {
            target = target.add(&induce(group, &t.subgroup, &t.character, ambient).scale_int(t.coeff));
        }
        VirtualInductionRecord { group: group.clone(), ambient, terms, target }
    }

    /// Checks the defining sum and the degree identity
    /// `r(ρ) = Σ_j a_j (G : H_j)`.
    pub fn verify(&self) -> Result<()> {
        let mut sum = ClassFunction::zero(&self.group, self.ambient);
        for t in &self.terms {
            if !self.group.is_subgroup(&t.subgroup) {
                return Err(Error::BadRecord("term subgroup is not a subgroup".into()));
            }
            sum = sum.add(
                &induce(&self.group, &t.subgroup, &t.character, self.ambient)
                    .scale_int(t.coeff),
            );
        }
        if sum != self.target {
            return Err(Error::BadRecord("terms do not sum to the target".into()));
        }
        let expected: i64 = self
            .terms
            .iter()
            .map(|t| t.coeff * (self.group.order() / t.subgroup.len()) as i64)
            .sum();
        let got = self
            .target
            .degree()
            .ok_or_else(|| Error::BadRecord("target degree is not an integer".into()))?;
        if got != BigInt::from(expected) {
            return Err(Error::DegreeMismatch {
                got: expected,
                expected: 0, // degree read back disagrees
            });
        }
        Ok(())
    }

    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.coeff * (self.group.order() / t.subgroup.len()) as i64)
            .sum()
    }

    /// The dual record, with every character inverted.
    pub fn dual(&self) -> Self {
        let terms: Vec<RecordTerm> = self
            .terms
            .iter()
            .map(|t| RecordTerm {
                coeff: t.coeff,
                subgroup: t.subgroup.clone(),
                character: t.character.inverse(),
            })
            .collect();
        Self::from_terms(&self.group, self.ambient, terms)
    }
}

/// Both sides of the Euler-factor inductivity identity, in factored form.
#[derive(Debug)]
pub struct EulerCheck {
    pub lhs: FactoredPoly,
    pub rhs: FactoredPoly,
    /// `Σ_j a_j Σ_{[g]} f_g`, which must equal the record degree.
    pub coset_degree: i64,
    pub degree_consistent: bool,
    pub pass: bool,
}

/// Verifies
/// `∏_j ∏_{[g]} (1 - ψ_j^g(Frob^{f_g}) η^{f_g} T^{f_g})^{a_j}
///   = ∏_j det(1 - Frob·η·T | Ind_{H_j}^G ψ_j |_D)^{a_j}`
/// for the cyclic decomposition group `D = ⟨frob⟩`, as an exact identity
/// of rational functions in `T`.
///
/// The left side runs over double cosets with subgroup-index arithmetic;
/// the right side factors the explicit monomial matrix of `frob` on each
/// induced representation over its coset-permutation cycles.
pub fn euler_inductivity_check(
    record: &VirtualInductionRecord,
    frob: usize,
    eta_exp: i64,
    ambient: u64,
) -> Result<EulerCheck> {
    let group = &record.group;
    let d = group.closure(&[frob]);
    let n_d = d.len();
    let mut lhs = FactoredPoly::new(ambient);
    let mut rhs = FactoredPoly::new(ambient);
    let mut coset_degree = 0i64;

    for term in &record.terms {
        let h = &term.subgroup;
        let psi = &term.character;

        // Left side: double cosets H\G/D.
        for g in group.double_cosets(h, &d) {
            let hg: BTreeSet<usize> = h
                .iter()
                .map(|&x| group.mul(group.mul(group.inv(g), x), g))
                .collect();
            let inter_size = d.iter().filter(|x| hg.contains(x)).count();
            let f_g = n_d / inter_size;
            coset_degree += term.coeff * f_g as i64;
            // Frob^{f_g} generates H^g ∩ D; its ψ^g-value is ψ(g c^{f_g} g^{-1}).
            let mut c_f = 0usize;
            for _ in 0..f_g {
                c_f = group.mul(c_f, frob);
            }
            let val = psi
                .conjugate(group, g)
                .eval_in(c_f, ambient)
                .expect("Frob^{f_g} lies in H^g ∩ D");
            let val = val.mul(&CyclotomicInt::root(ambient, eta_exp * f_g as i64));
            lhs.push(EulerPoly::one_minus_v_td(&val, f_g), term.coeff);
        }

        // Right side: cycles of frob on the left cosets of H in G.
        let reps = group.left_coset_reps(h);
        let mut coset_of = vec![usize::MAX; group.order()];
        for (i, &x) in reps.iter().enumerate() {
            for &hh in h {
                coset_of[group.mul(x, hh)] = i;
            }
        }
        let mut visited = vec![false; reps.len()];
        for start in 0..reps.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0usize;
            let mut value = CyclotomicInt::one(ambient);
            let mut i = start;
            loop {
                visited[i] = true;
                let image = group.mul(frob, reps[i]);
                let j = coset_of[image];
                // Matrix entry: ψ(reps[j]^{-1} · frob · reps[i]).
                let hh = group.mul(group.inv(reps[j]), image);
                value = value.mul(&psi.eval_in(hh, ambient).expect("entry lies in H"));
                len += 1;
                i = j;
                if i == start {
                    break;
                }
            }
            let value = value.mul(&CyclotomicInt::root(ambient, eta_exp * len as i64));
            rhs.push(EulerPoly::one_minus_v_td(&value, len), term.coeff);
        }
    }

    let degree_consistent = coset_degree == record.degree();
    let pass = lhs.eq_as_rational_function(&rhs) && degree_consistent;
    Ok(EulerCheck { lhs, rhs, coset_degree, degree_consistent, pass })
}

/// The signature `(-1)^{Σ_j a_j Σ_{[g]} e(η)(f_g - 1)}` computed twice:
/// once combinatorially from the double-coset degrees and once from
/// explicit Frobenius-power determinants on the induced blocks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignLedger {
    pub formula_sign: i64,
    pub determinant_sign: i64,
    pub pass: bool,
}

pub fn sign_ledger(
    record: &VirtualInductionRecord,
    frob: usize,
    e: u64,
    ambient: u64,
) -> Result<SignLedger> {
    let group = &record.group;
    let d = group.closure(&[frob]);
    let n_d = d.len();
    let mut exponent: i64 = 0;
    let mut det_sign = 1i64;

    for term in &record.terms {
        let h = &term.subgroup;
        for g in group.double_cosets(h, &d) {
            let hg: BTreeSet<usize> = h
                .iter()
                .map(|&x| group.mul(group.mul(group.inv(g), x), g))
                .collect();
            let inter_size = d.iter().filter(|x| hg.contains(x)).count();
            let f_g = n_d / inter_size;
            exponent += term.coeff * (e as i64) * (f_g as i64 - 1);

            // Determinant route: det(Frob^e on the f_g-dim induced block),
            // divided by the abelian part ψ^g(Frob^{f_g})^e.
            let mut c_f = 0usize;
            for _ in 0..f_g {
                c_f = group.mul(c_f, frob);
            }
            let val = term
                .character
                .conjugate(group, g)
                .eval_in(c_f, ambient)
                .expect("Frob^{f_g} lies in H^g ∩ D");
            let fd = frob_det_induced(f_g, e, &val);
            // matrix_det · val^{-e} must be ±1.
            let val_inv_e = val.conj().pow(e); // roots of unity: conj = inverse
            let ratio = fd.matrix_det.mul(&val_inv_e);
            let sign = if ratio == CyclotomicInt::one(ambient) {
                1i64
            } else if ratio == CyclotomicInt::one(ambient).neg() {
                -1i64
            } else {
                return Err(Error::BadRecord(
                    "determinant ratio is not a sign".into(),
                ));
            };
            if term.coeff.rem_euclid(2) == 1 {
                det_sign *= sign;
            }
        }
    }
    let formula_sign = if exponent.rem_euclid(2) == 1 { -1 } else { 1 };
    Ok(SignLedger { formula_sign, determinant_sign: det_sign, pass: formula_sign == det_sign })
}

// ---- JSON input formats ------------------------------------------------------

/// Group input: permutation generators or an explicit Cayley table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm_gens: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
}

pub fn group_from_spec(spec: &GroupSpec) -> Result<Arc<FiniteGroup>> {
    match (&spec.perm_gens, &spec.cayley) {
        (Some(gens), _) => {
            let degree = spec
                .degree
                .ok_or_else(|| Error::Config("perm_gens needs degree".into()))?;
            FiniteGroup::from_perm_gens(&spec.name, degree, gens)
        }
        (None, Some(table)) => FiniteGroup::from_cayley(&spec.name, table.clone()),
        (None, None) => named_group(&spec.name),
    }
}

/// The built-in test corpus groups by name.
pub fn named_group(name: &str) -> Result<Arc<FiniteGroup>> {
    match name.to_ascii_uppercase().as_str() {
        "S3" => Ok(FiniteGroup::s3()),
        "S4" => Ok(FiniteGroup::s4()),
        "A4" => Ok(FiniteGroup::a4()),
        "D4" => Ok(FiniteGroup::d4()),
        "Q8" => Ok(FiniteGroup::q8()),
        "V4" => Ok(FiniteGroup::klein4()),
        other => {
            if let Some(n) = other.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                if n >= 1 && n <= 64 {
                    return Ok(FiniteGroup::cyclic(n));
                }
            }
            Err(Error::Config(format!("unknown group {other}")))
        }
    }
}

/// Record term input: `{a, subgroup generators, character index}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecordTermSpec {
    pub a: i64,
    pub subgroup_gens: Vec<usize>,
    pub char_index: usize,
}

pub fn record_from_specs(
    group: &Arc<FiniteGroup>,
    ambient: u64,
    specs: &[RecordTermSpec],
) -> Result<VirtualInductionRecord> {
    let mut terms = Vec::with_capacity(specs.len());
    for s in specs {
        let h = group.closure(&s.subgroup_gens);
        let chars = abelian_characters(group, &h);
        let character = chars
            .get(s.char_index)
            .ok_or_else(|| Error::Config(format!("char index {} out of range", s.char_index)))?
            .clone();
        // Character orders must divide the ambient conductor.
        if ambient % character.m != 0 {
            return Err(Error::Config("ambient conductor too small for record".into()));
        }
        terms.push(RecordTerm { coeff: s.a, subgroup: h, character });
    }
    Ok(VirtualInductionRecord::from_terms(group, ambient, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_subgroup() -> Vec<usize> {
        vec![0]
    }

    #[test]
    fn group_constructions() {
        assert_eq!(FiniteGroup::s3().order(), 6);
        assert_eq!(FiniteGroup::d4().order(), 8);
        assert_eq!(FiniteGroup::q8().order(), 8);
        assert_eq!(FiniteGroup::a4().order(), 12);
        assert_eq!(FiniteGroup::s4().order(), 24);
        assert_eq!(FiniteGroup::cyclic(12).order(), 12);
        // Q8 has a unique element of order 2.
        let q8 = FiniteGroup::q8();
        let order2 = (0..8).filter(|&g| g != 0 && q8.element_order(g) == 2).count();
        assert_eq!(order2, 1);
    }

    #[test]
    fn subgroup_lattices() {
        assert_eq!(FiniteGroup::s3().subgroups().len(), 6);
        assert_eq!(FiniteGroup::d4().subgroups().len(), 10);
        assert_eq!(FiniteGroup::q8().subgroups().len(), 6);
        assert_eq!(FiniteGroup::a4().subgroups().len(), 10);
        assert_eq!(FiniteGroup::s4().subgroups().len(), 30);
    }

    #[test]
    fn s3_induced_two_dimensional() {
        // Ind_{A3}^{S3} of a nontrivial cubic character has degree 2 and
        // class values (2, -1, 0) on (e, 3-cycles, transpositions).
        let s3 = FiniteGroup::s3();
        let a3: Vec<usize> = s3
            .subgroups()
            .into_iter()
            .find(|h| h.len() == 3)
            .unwrap();
        let psi = abelian_characters(&s3, &a3)
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let m = 3;
        let ind = induce(&s3, &a3, &psi, m);
        assert!(ind.is_class_function());
        assert_eq!(ind.value(0), &CyclotomicInt::integer(m, BigInt::from(2)));
        for g in 1..6 {
            let expected = if a3.contains(&g) {
                CyclotomicInt::integer(m, BigInt::from(-1))
            } else {
                CyclotomicInt::zero(m)
            };
            assert_eq!(ind.value(g), &expected);
        }
    }

    #[test]
    fn induction_from_trivial_subgroup_is_regular() {
        let s3 = FiniteGroup::s3();
        let h = trivial_subgroup();
        let psi = AbChar::trivial(&s3, &h);
        let ind = induce(&s3, &h, &psi, 1);
        assert_eq!(ind.value(0), &CyclotomicInt::integer(1, BigInt::from(6)));
        for g in 1..6 {
            assert!(ind.value(g).is_zero());
        }
    }

    #[test]
    fn induction_h_equals_g_is_identity() {
        let d4 = FiniteGroup::d4();
        let all: Vec<usize> = (0..8).collect();
        for psi in abelian_characters(&d4, &all) {
            let m = psi.m;
            let ind = induce(&d4, &all, &psi, m);
            for g in 0..8 {
                assert_eq!(ind.value(g), &psi.eval_in(g, m).unwrap());
            }
        }
    }

    #[test]
    fn double_coset_examples() {
        let s3 = FiniteGroup::s3();
        let all: Vec<usize> = (0..6).collect();
        // H = G: single coset.
        assert_eq!(s3.double_cosets(&all, &all).len(), 1);
        // H = A3, D = a transposition subgroup: one double coset.
        let a3: Vec<usize> = s3.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let c2: Vec<usize> = s3.subgroups().into_iter().find(|h| h.len() == 2).unwrap();
        assert_eq!(s3.double_cosets(&a3, &c2).len(), 1);
        // D = {e}: double cosets = right H-cosets, i.e. (G : H) of them.
        assert_eq!(s3.double_cosets(&a3, &trivial_subgroup()).len(), 2);
    }

    #[test]
    fn mackey_exhaustive_small_groups() {
        for group in [FiniteGroup::s3(), FiniteGroup::d4(), FiniteGroup::q8(), FiniteGroup::a4()] {
            let subs = group.subgroups();
            for h in &subs {
                for psi in abelian_characters(&group, h) {
                    for d in &subs {
                        let ambient = psi.m;
                        let check = mackey_check(&group, h, &psi, d, ambient);
                        assert!(
                            check.pass,
                            "Mackey fails on {} for |H| = {}, |D| = {}",
                            group.name(),
                            h.len(),
                            d.len()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_reciprocity_small() {
        for group in [FiniteGroup::s3(), FiniteGroup::q8(), FiniteGroup::cyclic(12)] {
            let subs = group.subgroups();
            for h in &subs {
                for psi in abelian_characters(&group, h) {
                    for d in &subs {
                        for theta in abelian_characters(&group, d) {
                            let ambient = abelian::lcm(psi.m, theta.m);
                            let chi = induce(&group, d, &theta, ambient);
                            assert!(frobenius_reciprocity_holds(&group, h, &psi, &chi));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frob_det_examples() {
        // f = 1: plain power.
        let psi = CyclotomicInt::root(4, 1);
        let fd = frob_det_induced(1, 3, &psi);
        assert!(fd.pass);
        assert_eq!(fd.matrix_det, CyclotomicInt::root(4, 3));
        // f = 2, e = 1: det [[0, ψ],[1, 0]] = -ψ.
        let fd = frob_det_induced(2, 1, &psi);
        assert!(fd.pass);
        assert_eq!(fd.matrix_det, psi.neg());
        // f = 3, e = 2, ψ of order 4: ((-1)^2 ψ)^2 = ψ².
        let fd = frob_det_induced(3, 2, &psi);
        assert!(fd.pass);
        assert_eq!(fd.matrix_det, psi.pow(2));
    }

    #[test]
    fn frob_det_grid() {
        for f in 1..=6usize {
            for e in 1..=4u64 {
                for ord in [1u64, 2, 3, 4, 5, 6, 7, 8] {
                    let psi = CyclotomicInt::root(ord, 1);
                    assert!(frob_det_induced(f, e, &psi).pass, "f={f} e={e} ord={ord}");
                }
            }
        }
    }

    #[test]
    fn euler_trivial_record() {
        // Trivial ρ with D = ⟨Frob⟩ = G cyclic: both sides 1 - T.
        let c4 = FiniteGroup::cyclic(4);
        let all: Vec<usize> = (0..4).collect();
        let psi = AbChar::trivial(&c4, &all);
        let record = VirtualInductionRecord::from_terms(
            &c4,
            4,
            vec![RecordTerm { coeff: 1, subgroup: all, character: psi }],
        );
        record.verify().unwrap();
        let check = euler_inductivity_check(&record, 1, 0, 4).unwrap();
        assert!(check.pass);
        let (num, den) = check.lhs.expand();
        assert_eq!(num, EulerPoly::one_minus_v_td(&CyclotomicInt::one(4), 1));
        assert!(den.is_one());
    }

    #[test]
    fn euler_regular_representation_s3() {
        // Regular representation of S3 = Ind from the trivial subgroup:
        // ∏ over cosets of (1 - T^{f}) matches det(1 - PT) on 6 points.
        let s3 = FiniteGroup::s3();
        let h = trivial_subgroup();
        let psi = AbChar::trivial(&s3, &h);
        let record = VirtualInductionRecord::from_terms(
            &s3,
            6,
            vec![RecordTerm { coeff: 1, subgroup: h, character: psi }],
        );
        record.verify().unwrap();
        for frob in 0..6 {
            let check = euler_inductivity_check(&record, frob, 0, 6).unwrap();
            assert!(check.pass);
            assert_eq!(check.coset_degree, 6);
            // Cross-check the right side against an explicit 6×6
            // determinant of 1 - P T, evaluated as polynomials via DP on
            // the permutation matrix entries (values in {0, 1}).
            let n = 6usize;
            let m = 6u64;
            // det(1 - P T) has coefficients computable by cycle type; the
            // factored RHS expanded must equal it.
            let (num, den) = check.rhs.expand();
            assert!(den.is_one());
            // Build 1 - P T coefficient-wise via the cycle structure of
            // multiplication by frob (independent route: DP determinant
            // over EulerPoly entries is overkill; use direct expansion of
            // ∏ (1 - T^{cycle}) from the raw permutation).
            let mut visited = vec![false; n];
            let mut expected = EulerPoly::one(m);
            for start in 0..n {
                if visited[start] {
                    continue;
                }
                let mut len = 0;
                let mut cur = start;
                loop {
                    visited[cur] = true;
                    cur = s3.mul(frob, cur);
                    len += 1;
                    if cur == start {
                        break;
                    }
                }
                expected = expected.mul(&EulerPoly::one_minus_v_td(&CyclotomicInt::one(m), len));
            }
            assert_eq!(num, expected);
        }
    }

    #[test]
    fn euler_two_dim_s3_irrep() {
        // The 2-dim irrep as Ind_{A3} ψ with D generated by a
        // transposition: (1 - T)(1 + T) both ways.
        let s3 = FiniteGroup::s3();
        let a3: Vec<usize> = s3.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let psi = abelian_characters(&s3, &a3)
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let record = VirtualInductionRecord::from_terms(
            &s3,
            3,
            vec![RecordTerm { coeff: 1, subgroup: a3.clone(), character: psi }],
        );
        let transposition = (1..6).find(|&g| s3.element_order(g) == 2 && !a3.contains(&g)).unwrap();
        let check = euler_inductivity_check(&record, transposition, 0, 3).unwrap();
        assert!(check.pass);
        let (num, den) = check.lhs.expand();
        assert!(den.is_one());
        let expected = EulerPoly::one_minus_v_td(&CyclotomicInt::one(3), 1)
            .mul(&EulerPoly::one_minus_v_td(&CyclotomicInt::one(3).neg(), 1));
        assert_eq!(num, expected);
    }

    #[test]
    fn sign_ledger_examples() {
        let s3 = FiniteGroup::s3();
        let a3: Vec<usize> = s3.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let psi = abelian_characters(&s3, &a3)
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let record = VirtualInductionRecord::from_terms(
            &s3,
            3,
            vec![RecordTerm { coeff: 1, subgroup: a3, character: psi }],
        );
        // All f = 1 (D trivial): both signs +1.
        let ledger = sign_ledger(&record, 0, 1, 3).unwrap();
        assert!(ledger.pass && ledger.formula_sign == 1);
        // Even exponent: both +1.
        let transposition = (1..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let ledger = sign_ledger(&record, transposition, 2, 3).unwrap();
        assert!(ledger.pass && ledger.formula_sign == 1);
        // Odd exponent with f = 2 present: the sign is -1 on both paths.
        let ledger = sign_ledger(&record, transposition, 1, 3).unwrap();
        assert!(ledger.pass && ledger.formula_sign == -1);
    }

    #[test]
    fn record_verification_catches_mismatch() {
        let s3 = FiniteGroup::s3();
        let a3: Vec<usize> = s3.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let psi = abelian_characters(&s3, &a3)
            .into_iter()
            .find(|c| c.order() == 3)
            .unwrap();
        let mut record = VirtualInductionRecord::from_terms(
            &s3,
            3,
            vec![RecordTerm { coeff: 1, subgroup: a3, character: psi }],
        );
        record.verify().unwrap();
        // Corrupt the target.
        record.target = record.target.scale_int(2);
        assert!(record.verify().is_err());
    }

    #[test]
    fn named_groups_and_specs() {
        assert!(named_group("S3").is_ok());
        assert!(named_group("C12").is_ok());
        assert!(named_group("nope").is_err());
        let spec = GroupSpec {
            name: "S3".into(),
            degree: Some(3),
            perm_gens: Some(vec![vec![1, 0, 2], vec![1, 2, 0]]),
            cayley: None,
        };
        assert_eq!(group_from_spec(&spec).unwrap().order(), 6);
    }

    #[test]
    fn record_from_json_specs() {
        let s3 = FiniteGroup::s3();
        let json = r#"[{"a": 1, "subgroup_gens": [1], "char_index": 1},
                       {"a": -2, "subgroup_gens": [], "char_index": 0}]"#;
        let specs: Vec<RecordTermSpec> = serde_json::from_str(json).unwrap();
        let record = record_from_specs(&s3, 6, &specs).unwrap();
        record.verify().unwrap();
        // Term 2 is Ind from the trivial subgroup (regular character).
        assert_eq!(record.terms[1].subgroup, vec![0]);
        assert_eq!(record.degree(), {
            let h = s3.closure(&[1]);
            (6 / h.len()) as i64 - 2 * 6
        });
        assert!(record_from_specs(
            &s3,
            6,
            &[RecordTermSpec { a: 1, subgroup_gens: vec![1], char_index: 99 }]
        )
        .is_err());
    }
}

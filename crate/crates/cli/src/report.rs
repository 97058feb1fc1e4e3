//! Report schema and emitters.
//!
//! JSON is the canonical output and is deterministic for a fixed config
//! regardless of worker count: all collections are ordered and wall time
//! is deliberately kept out of the document (it goes to stderr). CSV is a
//! lossy projection with values rendered via `to_complex` at 12
//! significant digits and flagged approximate.

use serde::{Deserialize, Serialize};
use wittgauss_core::chars::{MultCharDescriptor, SignConvention};
use wittgauss_core::cyclo::{CyclotomicInt, ScaledCyclo};
use wittgauss_core::gauss::KappaSpec;

/// Schema version, pinned by the golden-file test.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Totals {
    pub pass: u64,
    pub fail: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridEcho {
    pub p: Vec<u64>,
    pub k: Vec<usize>,
    pub n: Vec<usize>,
    pub s: Vec<usize>,
    pub bound: u64,
}

/// One verified identity instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseRecord {
    Dh {
        p: u64,
        k: usize,
        n: usize,
        s: usize,
        sign: i64,
        char_desc: MultCharDescriptor,
        #[serde(skip_serializing_if = "Option::is_none")]
        lhs: Option<CyclotomicInt>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rhs: Option<CyclotomicInt>,
        pass: bool,
    },
    ClosedForm {
        p: u64,
        k: usize,
        n: usize,
        form: String,
        char_desc: MultCharDescriptor,
        #[serde(skip_serializing_if = "Option::is_none")]
        closed: Option<CyclotomicInt>,
        #[serde(skip_serializing_if = "Option::is_none")]
        oracle: Option<CyclotomicInt>,
        pass: bool,
    },
    AbsValue {
        p: u64,
        k: usize,
        n: usize,
        char_desc: MultCharDescriptor,
        check: String,
        pass: bool,
    },
    Sigma2 {
        k: usize,
        s: usize,
        w_index: u64,
        sigma1: CyclotomicInt,
        sigma_s: CyclotomicInt,
        lamprecht_reference: CyclotomicInt,
        pass: bool,
    },
    QuadReduction {
        p: u64,
        k: usize,
        nu: usize,
        w_index: u64,
        b_index: u64,
        pass: bool,
    },
    EpsilonConsistency {
        p: u64,
        e: usize,
        char_desc: MultCharDescriptor,
        twist_index: u64,
        eta_pi_exp: i64,
        route_a: ScaledCyclo,
        route_b: ScaledCyclo,
        pass: bool,
    },
    EpsilonUnramified {
        value: ScaledCyclo,
        pass: bool,
    },
    Mackey {
        group: String,
        subgroup_order: usize,
        char_index: usize,
        decomposition_order: usize,
        pass: bool,
    },
    FrobeniusReciprocity {
        group: String,
        subgroup_order: usize,
        checks: u64,
        pass: bool,
    },
    FrobDet {
        f: usize,
        e: u64,
        psi_order: u64,
        matrix_det: CyclotomicInt,
        closed_form: CyclotomicInt,
        pass: bool,
    },
    EulerInductivity {
        group: String,
        record: String,
        frob: usize,
        eta_exp: i64,
        degree_consistent: bool,
        pass: bool,
    },
    SignLedger {
        group: String,
        record: String,
        frob: usize,
        e: u64,
        formula_sign: i64,
        determinant_sign: i64,
        pass: bool,
    },
    PEuler {
        group: String,
        record: String,
        frob: usize,
        pass: bool,
    },
    InterpArch {
        index: usize,
        places: usize,
        degree: i64,
        pass: bool,
    },
    InterpConstants {
        index: usize,
        degree: i64,
        pass: bool,
    },
    InterpNegativeControl {
        index: usize,
        claimed_degree: i64,
        rejected: bool,
        pass: bool,
    },
}

impl CaseRecord {
    pub fn pass(&self) -> bool {
        match self {
            CaseRecord::Dh { pass, .. }
            | CaseRecord::ClosedForm { pass, .. }
            | CaseRecord::AbsValue { pass, .. }
            | CaseRecord::Sigma2 { pass, .. }
            | CaseRecord::QuadReduction { pass, .. }
            | CaseRecord::EpsilonConsistency { pass, .. }
            | CaseRecord::EpsilonUnramified { pass, .. }
            | CaseRecord::Mackey { pass, .. }
            | CaseRecord::FrobeniusReciprocity { pass, .. }
            | CaseRecord::FrobDet { pass, .. }
            | CaseRecord::EulerInductivity { pass, .. }
            | CaseRecord::SignLedger { pass, .. }
            | CaseRecord::PEuler { pass, .. }
            | CaseRecord::InterpArch { pass, .. }
            | CaseRecord::InterpConstants { pass, .. }
            | CaseRecord::InterpNegativeControl { pass, .. } => *pass,
        }
    }

    /// Approximate complex rendering of the recorded values, if any.
    fn approx(&self) -> (Option<(f64, f64)>, Option<(f64, f64)>) {
        match self {
            CaseRecord::Dh { lhs, rhs, .. } => (
                lhs.as_ref().map(|v| v.to_complex()),
                rhs.as_ref().map(|v| v.to_complex()),
            ),
            CaseRecord::ClosedForm { closed, oracle, .. } => (
                closed.as_ref().map(|v| v.to_complex()),
                oracle.as_ref().map(|v| v.to_complex()),
            ),
            CaseRecord::Sigma2 { sigma1, sigma_s, .. } => {
                (Some(sigma1.to_complex()), Some(sigma_s.to_complex()))
            }
            CaseRecord::EpsilonConsistency { route_a, route_b, .. } => {
                (Some(route_a.to_complex()), Some(route_b.to_complex()))
            }
            CaseRecord::FrobDet { matrix_det, closed_form, .. } => {
                (Some(matrix_det.to_complex()), Some(closed_form.to_complex()))
            }
            _ => (None, None),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            CaseRecord::Dh { .. } => "dh",
            CaseRecord::ClosedForm { .. } => "closed_form",
            CaseRecord::AbsValue { .. } => "abs_value",
            CaseRecord::Sigma2 { .. } => "sigma2",
            CaseRecord::QuadReduction { .. } => "quad_reduction",
            CaseRecord::EpsilonConsistency { .. } => "epsilon_consistency",
            CaseRecord::EpsilonUnramified { .. } => "epsilon_unramified",
            CaseRecord::Mackey { .. } => "mackey",
            CaseRecord::FrobeniusReciprocity { .. } => "frobenius_reciprocity",
            CaseRecord::FrobDet { .. } => "frob_det",
            CaseRecord::EulerInductivity { .. } => "euler_inductivity",
            CaseRecord::SignLedger { .. } => "sign_ledger",
            CaseRecord::PEuler { .. } => "p_euler",
            CaseRecord::InterpArch { .. } => "interp_arch",
            CaseRecord::InterpConstants { .. } => "interp_constants",
            CaseRecord::InterpNegativeControl { .. } => "interp_negative_control",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub toolkit_version: String,
    pub schema_version: u32,
    pub convention: SignConvention,
    pub kappa: KappaSpec,
    pub seed: u64,
    pub grid: GridEcho,
    pub cases: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub suites: Vec<Report>,
    pub totals: Totals,
}

impl Report {
    pub fn totals_from_cases(cases: &[CaseRecord]) -> Totals {
        let pass = cases.iter().filter(|c| c.pass()).count() as u64;
        Totals { pass, fail: cases.len() as u64 - pass }
    }

    pub fn all_pass(&self) -> bool {
        self.totals.fail == 0 && self.suites.iter().all(|s| s.all_pass())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,kind,case,lhs_re,lhs_im,rhs_re,rhs_im,approx,pass\n");
        self.csv_rows(&mut out);
        out
    }

    fn csv_rows(&self, out: &mut String) {
        for (i, case) in self.cases.iter().enumerate() {
            let (l, r) = case.approx();
            let fmt = |v: Option<(f64, f64)>| match v {
                None => ",".to_string(),
                Some((re, im)) => format!("{:.12e},{:.12e}", re, im),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.suite,
                case.kind_name(),
                i,
                fmt(l),
                fmt(r),
                "true",
                case.pass()
            ));
        }
        for sub in &self.suites {
            sub.csv_rows(out);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.text_lines(&mut out, 0);
        out
    }

    fn text_lines(&self, out: &mut String, depth: usize) {
        let indent = "  ".repeat(depth);
        out.push_str(&format!(
            "{}suite {}: {} cases, {} passed, {} failed\n",
            indent,
            self.suite,
            self.totals.pass + self.totals.fail,
            self.totals.pass,
            self.totals.fail
        ));
        for (i, case) in self.cases.iter().enumerate() {
            if !case.pass() {
                out.push_str(&format!(
                    "{}  FAIL case {} [{}]: {}\n",
                    indent,
                    i,
                    case.kind_name(),
                    serde_json::to_string(case).unwrap_or_default()
                ));
            }
        }
        for sub in &self.suites {
            sub.text_lines(out, depth + 1);
        }
    }
}

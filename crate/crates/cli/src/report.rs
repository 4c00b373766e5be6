//! The machine-readable report and its human rendering.

use std::fmt::Write as _;
use std::time::Duration;

use hsc_core::bk::{poly_string, BkReport, KostantTable, WeylCounts};
use hsc_core::spectral::{CheckOutcome, PageSummary, TensorReport};
use hsc_core::Rational;
use serde::{Deserialize, Serialize};

use crate::config::InstanceConfig;

pub const SCHEMA: &str = "hsc-report/1";

/// One nonzero product of cohomology basis classes, `[deg, index]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: [usize; 2],
    pub right: [usize; 2],
    /// Coordinates in degree `left[0] + right[0]`.
    pub value: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySection {
    pub algebra_dim: usize,
    pub k_dim: usize,
    pub module_dim: usize,
    pub betti: Vec<usize>,
    pub total_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<ProductEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSection {
    pub ideal_dim: usize,
    pub betti: Vec<usize>,
    pub pages: PageSummary,
    /// `dim H^p(g/I, k/I_k; H^q(I, I_k; M))`, indexed `[q][p]`.
    pub hq_dims: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<TensorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylSection {
    pub root_type: String,
    pub levi: Vec<usize>,
    pub k: Vec<usize>,
    pub counts: WeylCounts,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kostant: Vec<KostantTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub instance: InstanceConfig,
    pub seed: u64,
    pub sample_limit: usize,
    pub assumptions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bk: Option<BkReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylSection>,
    pub verdicts: Vec<CheckOutcome>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, instance: InstanceConfig, seed: u64, sample_limit: usize) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            instance,
            seed,
            sample_limit,
            assumptions: vec!["exact rational arithmetic stands in for the complex numbers".into()],
            cohomology: None,
            spectral: None,
            bk: None,
            weyl: None,
            verdicts: Vec::new(),
            passed: true,
        }
    }

    pub fn verdict(&mut self, name: &str, failures: Vec<String>) {
        self.verdicts.push(CheckOutcome { name: name.into(), passed: failures.is_empty(), failures });
    }

    pub fn finish(mut self) -> Self {
        self.passed = self.verdicts.iter().all(|v| v.passed);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn list(v: &[usize]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn opt(x: Option<usize>) -> String {
    x.map_or("none".into(), |r| r.to_string())
}

fn grid(out: &mut String, title: &str, dims: &[Vec<usize>]) {
    // dims[p][q]; printed with q increasing upwards.
    let max_q = dims.iter().map(|c| c.len()).max().unwrap_or(0);
    let _ = writeln!(out, "  {title}");
    for q in (0..max_q).rev() {
        let row: Vec<String> = dims.iter().map(|c| c.get(q).map_or(" ".into(), |d| d.to_string())).collect();
        let _ = writeln!(out, "    q={q:<2} {}", row.iter().map(|x| format!("{x:>3}")).collect::<String>());
    }
}

fn pages(out: &mut String, s: &PageSummary) {
    for (r, d) in s.dims.iter().enumerate() {
        grid(out, &format!("E_{r}"), d);
    }
    grid(out, "E_inf", &s.infinity_dims);
    if !s.differential_ranks.is_empty() {
        let ranks: Vec<String> =
            s.differential_ranks.iter().map(|(r, p, q, k)| format!("d_{r}({p},{q}) rank {k}")).collect();
        let _ = writeln!(out, "  nonzero differentials: {}", ranks.join(", "));
    }
}

/// Plain-text summary for stdout; the only place wall time appears.
pub fn render_human(report: &Report, elapsed: Duration) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "hsc {}", report.command);
    if let Some(p) = &report.instance.preset {
        let _ = writeln!(out, "instance: {p}, levi {}, t-support {}", list(&report.instance.levi), list(&report.instance.t_support));
    } else if let Some(c) = &report.instance.custom {
        let _ = writeln!(out, "instance: {} with k = {:?}, ideal = {:?}", c.display(), report.instance.k, report.instance.ideal);
    }
    if let Some(c) = &report.cohomology {
        let _ = writeln!(out, "dim g = {}, dim k = {}, dim M = {}", c.algebra_dim, c.k_dim, c.module_dim);
        let _ = writeln!(out, "Betti numbers: {}  (total {})", list(&c.betti), c.total_dim);
    }
    if let Some(s) = &report.spectral {
        let _ = writeln!(out, "Betti numbers: {}", list(&s.betti));
        pages(&mut out, &s.pages);
        let _ = writeln!(out, "first stationary page: E_{}", opt(s.pages.degeneration_page));
    }
    if let Some(b) = &report.bk {
        let i = &b.instance;
        let _ = writeln!(out, "K = {}, dim g_K = {}, dim ũ_K = {}, dim l_Δ = {}", list(&i.k), i.g_dim, i.u_dim, i.l_delta_dim);
        let _ = writeln!(out, "Betti numbers: {}  (total {}, |W^P| = {})", list(&b.betti), b.total_dim, b.weyl.min_coset_reps);
        if let Some(p) = &b.poincare {
            let _ = writeln!(out, "dims by q-degree: {}", list(p));
            let _ = writeln!(out, "Poincaré polynomial: {}", poly_string(p));
        }
        let _ = writeln!(out, "degeneration page: {} (first stationary page E_{})", opt(b.degeneration_page), opt(b.stationary_from));
        if let (Some(a), Some(q)) = (&b.subalgebra_poincare, &b.quotient_poincare) {
            let _ = writeln!(out, "subalgebra A: {}   quotient H/(A⁺): {}", list(a), list(q));
        }
        if let Some(f) = b.factorization() {
            let _ = writeln!(out, "factorization: {f}");
        }
        let adv: Vec<String> = b.kostant_by_length.iter().map(|(x, y)| format!("{x}/{y}")).collect();
        let _ = writeln!(out, "invariants vs coset lengths (advisory): {}", adv.join(" "));
    }
    if let Some(w) = &report.weyl {
        let c = &w.counts;
        let _ = writeln!(out, "type {}, levi {}, K {}", w.root_type, list(&w.levi), list(&w.k));
        let _ = writeln!(out, "|W| = {}, |W_P| = {}, |W^P| = {}", c.order, c.levi_order, c.min_coset_reps);
        let _ = writeln!(out, "|W_(P_K)| = {}, |W_(P_K)/W_P| = {}, |W/W_(P_K)| = {}", c.k_order, c.k_over_levi, c.k_cosets);
        let _ = writeln!(out, "W^P by length: {}", list(&c.length_counts));
        for t in &w.kostant {
            let _ = writeln!(
                out,
                "K = {}: invariants {} total {} vs |W/W_(P_K)| = {}{}",
                list(&t.k),
                list(&t.invariant_dims),
                t.total,
                t.expected_total,
                if t.per_degree_match { "" } else { " (per-degree mismatch, advisory)" }
            );
        }
    }
    for v in &report.verdicts {
        let _ = writeln!(out, "[{}] {}", if v.passed { "pass" } else { "FAIL" }, v.name);
        for f in v.failures.iter().take(5) {
            let _ = writeln!(out, "       {f}");
        }
    }
    let _ = writeln!(out, "verdict: {}", if report.passed { "PASS" } else { "FAIL" });
    let _ = writeln!(out, "wall time: {:.3}s", elapsed.as_secs_f64());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_serialize_as_fractions() {
        let e = ProductEntry { left: [1, 0], right: [1, 0], value: vec![(0, Rational::new(-1, 2)), (1, Rational::from_int(3))] };
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"-1/2\"") && json.contains("\"3\""), "{json}");
        assert_eq!(serde_json::from_str::<ProductEntry>(&json).unwrap(), e);
    }
}

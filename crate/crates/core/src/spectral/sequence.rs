use serde::{Deserialize, Serialize};

use super::bicomplex::DoubleComplex;
use super::filtration::FilteredComplexState;
use super::hq::HqModule;
use super::pages::PageState;
use crate::cochains::CohomologyRing;
use crate::error::Result;
use crate::lie::{LieModuleData, TripleData};

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push(CheckOutcome { name: name.to_string(), passed: failures.is_empty(), failures });
    }

    /// Records `Ok(failures)` as is and an error as a single failure.
    pub fn record_result(&mut self, name: &str, r: Result<Vec<String>>) {
        self.record(name, r.unwrap_or_else(|e| vec![e.to_string()]));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

/// Knobs for the sampled checks.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Largest number of basis cochains tried per bidegree in sampled checks.
    pub sample_limit: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { sample_limit: 48, seed: 0 }
    }
}

/// Everything computed for one triple and module: the filtered complex, its
/// pages, the double complex, the `g/I`-modules `H^q(I, I_k; M)` and `H(g, k; M)`.
#[derive(Debug)]
pub struct HochschildSerre {
    pub(crate) fc: FilteredComplexState,
    pub(crate) pages: PageState,
    pub(crate) dc: DoubleComplex,
    pub(crate) hq: HqModule,
    pub(crate) ring: CohomologyRing,
}

impl HochschildSerre {
    /// `module` is over the triple's given basis. Pages are computed until
    /// degeneration, or through `max_r`.
    pub fn build(triple: &TripleData, module: &LieModuleData, max_r: Option<usize>) -> Result<Self> {
        Self::from_state(FilteredComplexState::new(triple, module)?, max_r)
    }

    pub fn from_state(fc: FilteredComplexState, max_r: Option<usize>) -> Result<Self> {
        let pages = PageState::compute(&fc, max_r.map(|r| r.max(2)))?;
        let dc = DoubleComplex::new(&fc)?;
        let hq = HqModule::new(&fc, &dc)?;
        let ring = fc.complex().cohomology()?;
        Ok(HochschildSerre { fc, pages, dc, hq, ring })
    }

    pub fn filtered(&self) -> &FilteredComplexState {
        &self.fc
    }

    pub fn pages(&self) -> &PageState {
        &self.pages
    }

    pub fn double_complex(&self) -> &DoubleComplex {
        &self.dc
    }

    pub fn hq(&self) -> &HqModule {
        &self.hq
    }

    /// `H(g, k; M)` in adapted coordinates.
    pub fn ring(&self) -> &CohomologyRing {
        &self.ring
    }

    pub fn top_degree(&self) -> usize {
        self.fc.top_degree()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.ring.betti()
    }

    /// Whether `C^p(g/I, k/I_k; C^q(I, I_k; M))` can be nonzero.
    pub fn in_range(&self, p: usize, q: usize) -> bool {
        p <= self.dc.max_p() && q <= self.dc.max_q()
    }

    /// Runs every structural check on the sequence and the comparison maps.
    pub fn verify(&self, opts: &CheckOptions) -> VerificationReport {
        let mut rep = VerificationReport::default();
        let top = self.top_degree();
        let (fc, dc) = (&self.fc, &self.dc);
        rep.record("filtration", fc.check());
        rep.record("pages.inclusions", self.pages.check_inclusions());
        rep.record("pages.square_zero", self.pages.check_square_zero());
        rep.record("pages.presentations", self.pages.check_presentations());
        rep.record("pages.next_page", self.pages.check_next_page());
        rep.record("convergence", self.pages.check_convergence(fc));
        rep.record("restriction_map", dc.check_restriction(fc));
        rep.record("lift_stability", dc.check_stability(fc));
        rep.record("d0_vertical", dc.check_d0(fc));
        rep.record("lift_differential", dc.check_lift_differential(fc));
        rep.record("commuting_differentials", dc.check_commuting(top, opts.sample_limit, opts.seed));
        rep.record("restriction_differential", dc.check_restriction_differential(top, opts.sample_limit, opts.seed));
        rep.record("hq.well_defined", self.hq.check_well_defined(dc));
        rep.record("hq.brackets", self.hq.check_brackets(fc.triple().adapted()));
        rep.record("hq.restriction_invariance", self.hq.check_restriction_invariance(fc, dc, &self.ring));
        rep.record_result("e1", self.check_e1());
        rep.record_result("d1", self.check_d1());
        rep.record_result("alpha_d_plus", self.check_alpha_d_plus(opts));
        rep.record_result("psi", self.check_psi());
        rep.record_result("edge_maps", self.check_edges());
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::linalg::SparseVec;

    fn unit(i: usize) -> SparseVec {
        SparseVec::unit(i)
    }

    fn assert_verified(hs: &HochschildSerre) {
        let rep = hs.verify(&CheckOptions::default());
        let failed: Vec<_> = rep.failed().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn sl2_squared_over_torus() {
        let g = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2());
        let t = TripleData::build(&g, &[unit(0), unit(3)], &[unit(0), unit(1), unit(2)]).unwrap();
        let hs = HochschildSerre::build(&t, &LieModuleData::trivial(6, 1), None).unwrap();
        assert_eq!(hs.betti(), vec![1, 0, 2, 0, 1]);
        assert_verified(&hs);
        let hs = HochschildSerre::build(&t, &LieModuleData::adjoint(&g), None).unwrap();
        assert_verified(&hs);
    }

    #[test]
    fn heisenberg_with_abelian_ideal() {
        let h = LieAlgebraData::from_int_constants(3, &[(0, 1, &[(2, 1)])]).unwrap();
        let t = TripleData::build(&h, &[], &[unit(1), unit(2)]).unwrap();
        let hs = HochschildSerre::build(&t, &LieModuleData::trivial(3, 1), None).unwrap();
        assert_eq!(hs.betti(), vec![1, 2, 2, 1]);
        assert_verified(&hs);
        let hs = HochschildSerre::build(&t, &LieModuleData::adjoint(&h), None).unwrap();
        assert_verified(&hs);
    }

    #[test]
    fn borel_of_sl2() {
        let b = LieAlgebraData::from_int_constants(2, &[(0, 1, &[(1, 2)])]).unwrap();
        let t = TripleData::build(&b, &[], &[unit(1)]).unwrap();
        let hs = HochschildSerre::build(&t, &LieModuleData::trivial(2, 1), None).unwrap();
        assert_eq!(hs.betti(), vec![1, 1, 0]);
        assert_verified(&hs);
        let hs = HochschildSerre::build(&t, &LieModuleData::adjoint(&b), None).unwrap();
        assert_verified(&hs);
    }

    #[test]
    fn sl2_squared_products_and_tensor_decomposition() {
        let g = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2());
        let t = TripleData::build(&g, &[unit(0), unit(3)], &[unit(0), unit(1), unit(2)]).unwrap();
        let hs = HochschildSerre::build(&t, &LieModuleData::trivial(6, 1), None).unwrap();
        let pairing = hs.adapted_pairing(&crate::lie::ModulePairing::trivial(6));
        let opts = CheckOptions::default();
        assert!(hs.check_leibniz(&pairing, &opts).unwrap().is_empty());
        assert!(hs.check_psi_products(&pairing).unwrap().is_empty());
        let td = hs.tensor_decomposition().unwrap();
        let r = &td.report;
        assert_eq!(r.base_dims, vec![1, 0, 1]);
        assert_eq!(r.fiber_dims, vec![1, 0, 1]);
        assert!(r.algebra_iso, "{:?}", r.failures);
        assert!(r.degenerates_at_e2);
        assert_eq!(r.pi_star_injective, Some(true));
        assert_eq!(r.i_star_onto_invariants, Some(true));
        assert_eq!(r.ker_i_star_dims, Some(vec![0, 0, 1, 0, 1]));
        assert_eq!(r.kernel_is_ideal, Some(true));
        assert_eq!(r.free_basis, Some(true));
    }

    #[test]
    fn central_extension_has_a_nonzero_d2() {
        let h = LieAlgebraData::from_int_constants(3, &[(0, 1, &[(2, 1)])]).unwrap();
        let t = TripleData::build(&h, &[], &[unit(2)]).unwrap();
        let hs = HochschildSerre::build(&t, &LieModuleData::trivial(3, 1), None).unwrap();
        assert_eq!(hs.pages().degeneration_page(), Some(3));
        assert_verified(&hs);
        let pairing = hs.adapted_pairing(&crate::lie::ModulePairing::trivial(3));
        assert!(hs.check_leibniz(&pairing, &CheckOptions::default()).unwrap().is_empty());
        assert!(hs.check_psi_products(&pairing).unwrap().is_empty());
        let td = hs.tensor_decomposition().unwrap();
        assert!(td.report.algebra_iso);
        assert!(!td.report.degenerates_at_e2);
    }
}

//! Argument definitions and the four commands.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hsc_core::bk::{
    kostant_table, supersets_of_levi, verify_structure, BKInstance, BkOptions, CartanType, ParabolicDatum, RootDatum,
};
use hsc_core::cochains::{cartan_failures, cohomology, contraction_failures, square_zero_failures, CohomologyRing, RelativeComplex};
use hsc_core::lie::{LieAlgebraData, LieModuleData, ModulePairing, PairData, TripleData};
use hsc_core::linalg::SparseVec;
use hsc_core::spectral::{CheckOptions, HochschildSerre};
use rayon::prelude::*;

use crate::algebra_file::{parse_vector, read_algebra};
use crate::config::{parse_index_set, parse_spec_list, ConfigFile, InstanceConfig, ModuleSpec};
use crate::report::{CohomologySection, ProductEntry, Report, SpectralSection, WeylSection};
use crate::InputError;

pub const DEFAULT_SAMPLE_LIMIT: usize = 48;

#[derive(Debug, Parser)]
#[command(name = "hsc", version, about = "Exact relative Lie algebra cohomology and Hochschild-Serre spectral sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers and cup products of H(g, k; M).
    Cohomology(CommonArgs),
    /// Pages, differentials and structural checks of the spectral sequence.
    Spectral(CommonArgs),
    /// Belkale-Kumar instance: degeneration, coset counts and the factorization.
    BkVerify(BkArgs),
    /// Weyl group and coset counts for a preset and parabolic.
    Weyl(WeylArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InstanceArgs {
    /// TOML file with `[instance]` and `[run]` tables; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Root system type such as A2, B2 or G2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Levi simple roots, 1-based, e.g. "" or "1,3".
    #[arg(long)]
    pub levi: Option<String>,
    /// Support positions among the non-Levi simple roots, 1-based.
    #[arg(long = "t-support")]
    pub t_support: Option<String>,
    /// Structure-constant file.
    #[arg(long)]
    pub custom: Option<PathBuf>,
    /// Comma-separated basis of k: labels, indices or `i:c j:c` combinations.
    #[arg(long)]
    pub k: Option<String>,
    /// Comma-separated basis of the ideal, same syntax as --k.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Coefficient module: trivial or adjoint.
    #[arg(long)]
    pub module: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Worker threads.
    #[arg(long, short = 'j', env = "HSC_JOBS")]
    pub jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest number of basis cochains tried per cell in sampled checks.
    #[arg(long)]
    pub sample_limit: Option<usize>,
    /// Suppress the human-readable summary.
    #[arg(long, short = 'q')]
    pub quiet: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BkArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Skip the generic spectral-sequence checks.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also compute invariants of H(ũ_K) for every K containing the Levi set.
    #[arg(long)]
    pub kostant: bool,
}

/// Run settings after merging the config file and flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolved {
    pub instance: InstanceConfig,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub sample_limit: usize,
    pub quiet: bool,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Resolved, InputError> {
        let file = match &self.instance.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let a = &self.instance;
        let mut inst = file.instance;
        if a.preset.is_some() || a.custom.is_some() {
            inst.preset = a.preset.clone();
            inst.custom = a.custom.clone();
        }
        if let Some(l) = &a.levi {
            inst.levi = parse_index_set(l)?;
        }
        if let Some(t) = &a.t_support {
            inst.t_support = parse_index_set(t)?;
        }
        if let Some(k) = &a.k {
            inst.k = parse_spec_list(k);
        }
        if let Some(i) = &a.ideal {
            inst.ideal = parse_spec_list(i);
        }
        if let Some(m) = &a.module {
            inst.module = m.parse()?;
        }
        inst.levi.sort_unstable();
        inst.levi.dedup();
        inst.t_support.sort_unstable();
        inst.t_support.dedup();
        inst.validate()?;
        let run = file.run;
        let sample_limit = self.run.sample_limit.or(run.sample_limit).unwrap_or(DEFAULT_SAMPLE_LIMIT);
        if sample_limit == 0 {
            return Err(InputError::Value("sample limit must be positive".into()));
        }
        Ok(Resolved {
            instance: inst,
            jobs: self.run.jobs.or(run.jobs),
            seed: self.run.seed.or(run.seed).unwrap_or(0),
            out: self.run.out.clone().or(run.out),
            sample_limit,
            quiet: self.run.quiet,
        })
    }
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Cohomology(c) | Command::Spectral(c) => c,
            Command::BkVerify(b) => &b.common,
            Command::Weyl(w) => &w.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Cohomology(_) => "cohomology",
            Command::Spectral(_) => "spectral",
            Command::BkVerify(_) => "bk-verify",
            Command::Weyl(_) => "weyl",
        }
    }
}

fn instance_err(e: impl std::fmt::Display) -> InputError {
    InputError::Instance(e.to_string())
}

fn parabolic(inst: &InstanceConfig) -> Result<ParabolicDatum, InputError> {
    let name = inst.preset.as_deref().expect("validated");
    let kind: CartanType = name.parse().map_err(instance_err)?;
    let root = RootDatum::new(kind).map_err(instance_err)?;
    let levi: Vec<usize> = inst.levi.iter().map(|i| i - 1).collect();
    ParabolicDatum::new(root, &levi).map_err(instance_err)
}

fn bk_instance(inst: &InstanceConfig) -> Result<BKInstance, InputError> {
    BKInstance::build(parabolic(inst)?, &inst.t_support).map_err(instance_err)
}

fn vectors(specs: &[String], g: &LieAlgebraData) -> Result<Vec<SparseVec>, InputError> {
    specs.iter().map(|s| parse_vector(s, g)).collect()
}

fn module_over(spec: ModuleSpec, g: &LieAlgebraData) -> LieModuleData {
    match spec {
        ModuleSpec::Trivial => LieModuleData::trivial(g.dim(), 1),
        ModuleSpec::Adjoint => LieModuleData::adjoint(g),
    }
}

fn custom_algebra(inst: &InstanceConfig) -> Result<LieAlgebraData, InputError> {
    read_algebra(inst.custom.as_deref().expect("validated"))
}

fn pair_and_module(inst: &InstanceConfig) -> Result<(PairData, LieModuleData), InputError> {
    if inst.preset.is_some() {
        let bk = bk_instance(inst)?;
        let triple = bk.triple();
        let m = triple.rebase_module(&module_over(inst.module, bk.g_k()));
        return Ok((triple.pair(), m));
    }
    let g = custom_algebra(inst)?;
    let k = vectors(&inst.k, &g)?;
    let (pair, p) = PairData::from_subalgebra(&g, &k).map_err(instance_err)?;
    let m = module_over(inst.module, &g).rebase(&p);
    Ok((pair, m))
}

fn triple_and_module(inst: &InstanceConfig) -> Result<(TripleData, LieModuleData), InputError> {
    if inst.preset.is_some() {
        let bk = bk_instance(inst)?;
        let m = module_over(inst.module, bk.g_k());
        return Ok((bk.triple().clone(), m));
    }
    let g = custom_algebra(inst)?;
    let k = vectors(&inst.k, &g)?;
    let ideal = vectors(&inst.ideal, &g)?;
    let triple = TripleData::build(&g, &k, &ideal).map_err(instance_err)?;
    Ok((triple, module_over(inst.module, &g)))
}

fn products(ring: &CohomologyRing) -> Vec<ProductEntry> {
    let top = ring.top_degree();
    let mut out = Vec::new();
    for p in 0..=top {
        for q in 0..=top - p {
            for i in 0..ring.group(p).dim() {
                for j in 0..ring.group(q).dim() {
                    if let Some(v) = ring.product(p, i, q, j).filter(|v| !v.is_zero()) {
                        out.push(ProductEntry { left: [p, i], right: [q, j], value: v.entries().to_vec() });
                    }
                }
            }
        }
    }
    out
}

fn complex_verdicts(report: &mut Report, cx: &RelativeComplex, limit: usize, seed: u64) {
    let ops = cx.ops();
    report.verdict("complex.square_zero", square_zero_failures(ops, limit, seed));
    report.verdict("complex.cartan", cartan_failures(ops, limit, seed));
    report.verdict("complex.contraction", contraction_failures(ops, limit, seed));
    report.verdict(
        "relative.d_stable",
        if cx.check_d_stable() { Vec::new() } else { vec!["d leaves the relative subcomplex".into()] },
    );
}

fn sampled_assumption(r: &Resolved) -> String {
    format!("sampled checks try at most {} basis cochains per cell, seed {}", r.sample_limit, r.seed)
}

fn bk_assumptions(report: &mut Report) {
    report.assumptions.extend([
        "the identification of H(g_K, l_Δ) with the deformed product on H*(G/P) is external and not verified here".to_string(),
        "L_K-invariants are computed as l_K-invariants of the connected Levi".to_string(),
        "support positions number the non-Levi simple roots in increasing order".to_string(),
        "the degeneration page is the first stationary page, reported as at least 2".to_string(),
        "the per-degree Kostant comparison is advisory".to_string(),
    ]);
}

pub fn run_cohomology(r: &Resolved) -> anyhow::Result<Report> {
    let (pair, module) = pair_and_module(&r.instance)?;
    let mut report = Report::new("cohomology", r.instance.clone(), r.seed, r.sample_limit);
    report.assumptions.push(sampled_assumption(r));
    let ring_pairing = (module.dim() == 1 && module.is_trivial()).then(|| ModulePairing::trivial(pair.dim()));
    let (cx, ring) = cohomology(&pair, &module, ring_pairing.as_ref()).context("computing cohomology")?;
    complex_verdicts(&mut report, &cx, r.sample_limit, r.seed);
    if ring.has_products() {
        let comm: Vec<String> = ring
            .graded_commutativity_failures()
            .into_iter()
            .map(|(p, i, q, j)| format!("a_{p},{i} · b_{q},{j} is not graded commutative"))
            .collect();
        report.verdict("ring.graded_commutative", comm);
        let assoc: Vec<String> =
            ring.associativity_failures().into_iter().map(|(a, b, c)| format!("degrees ({a}, {b}, {c})")).collect();
        report.verdict("ring.associative", assoc);
    }
    report.cohomology = Some(CohomologySection {
        algebra_dim: pair.dim(),
        k_dim: pair.k_indices.len(),
        module_dim: module.dim(),
        betti: ring.betti(),
        total_dim: ring.total_dim(),
        products: ring.has_products().then(|| products(&ring)),
    });
    Ok(report.finish())
}

pub fn run_spectral(r: &Resolved) -> anyhow::Result<Report> {
    let (triple, module) = triple_and_module(&r.instance)?;
    let mut report = Report::new("spectral", r.instance.clone(), r.seed, r.sample_limit);
    report.assumptions.push(sampled_assumption(r));
    if r.instance.preset.is_some() {
        bk_assumptions(&mut report);
    }
    let hs = HochschildSerre::build(&triple, &module, None).context("building the spectral sequence")?;
    let opts = CheckOptions { sample_limit: r.sample_limit, seed: r.seed };
    complex_verdicts(&mut report, hs.filtered().complex(), r.sample_limit, r.seed);
    for c in hs.verify(&opts).checks {
        report.verdict(&format!("spectral.{}", c.name), c.failures);
    }
    let dc = hs.double_complex();
    let hq_dims = (0..=dc.max_q()).map(|q| (0..=dc.max_p()).map(|p| hs.hq().cohomology_dim(p, q)).collect()).collect();
    let tensor = if module.dim() == 1 && module.is_trivial() {
        let n = triple.blocks().total();
        report.assumptions.push("the tensor hypothesis is checked only for the modules H^q(I, I_k) that occur".into());
        match hs.tensor_decomposition() {
            Ok(d) => {
                report.verdict("tensor", d.report.failures.clone());
                let psi = hs.check_psi_products(&ModulePairing::trivial(n)).unwrap_or_else(|e| vec![e.to_string()]);
                report.verdict("psi_products", psi);
                Some(d.report)
            }
            Err(e) => {
                // The hypothesis may genuinely fail; that is reported, not fatal.
                report.assumptions.push(format!("tensor decomposition unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };
    report.spectral = Some(SpectralSection {
        ideal_dim: dc.ideal_dim(),
        betti: hs.betti(),
        pages: hs.pages().summary(),
        hq_dims,
        tensor,
    });
    Ok(report.finish())
}

pub fn run_bk(r: &Resolved, quick: bool) -> anyhow::Result<Report> {
    if r.instance.preset.is_none() {
        return Err(InputError::Value("bk-verify needs --preset".into()).into());
    }
    if r.instance.module != ModuleSpec::Trivial {
        return Err(InputError::Value("bk-verify uses trivial coefficients".into()).into());
    }
    let inst = bk_instance(&r.instance)?;
    let mut report = Report::new("bk-verify", r.instance.clone(), r.seed, r.sample_limit);
    report.assumptions.push(sampled_assumption(r));
    bk_assumptions(&mut report);
    let opts = BkOptions { spectral_checks: !quick, check: CheckOptions { sample_limit: r.sample_limit, seed: r.seed } };
    let analysis = verify_structure(&inst, &opts).context("analysing the instance")?;
    let mut bk = analysis.report;
    report.verdicts = std::mem::take(&mut bk.checks.checks);
    report.bk = Some(bk);
    Ok(report.finish())
}

pub fn run_weyl(r: &Resolved, kostant: bool) -> anyhow::Result<Report> {
    if r.instance.preset.is_none() {
        return Err(InputError::Value("weyl needs --preset".into()).into());
    }
    let par = parabolic(&r.instance)?;
    let k = par.k_set(&r.instance.t_support).map_err(instance_err)?;
    let counts = par.weyl_counts(&k);
    let mut report = Report::new("weyl", r.instance.clone(), r.seed, r.sample_limit);
    report.verdict(
        "coset_product",
        if counts.k_over_levi * counts.k_cosets == counts.min_coset_reps {
            Vec::new()
        } else {
            vec!["|W_(P_K)/W_P| · |W/W_(P_K)| differs from |W^P|".into()]
        },
    );
    report.verdict(
        "length_counts",
        if counts.length_counts.iter().sum::<usize>() == counts.min_coset_reps {
            Vec::new()
        } else {
            vec!["length counts do not sum to |W^P|".into()]
        },
    );
    let mut tables = Vec::new();
    if kostant {
        bk_assumptions(&mut report);
        let sets = supersets_of_levi(&par);
        tables = sets
            .par_iter()
            .map(|k| kostant_table(&par, k))
            .collect::<Result<Vec<_>, _>>()
            .context("computing invariants")?;
        let bad: Vec<String> = tables
            .iter()
            .filter(|t| !t.total_matches())
            .map(|t| format!("K = {:?}: total {} vs {}", t.k, t.total, t.expected_total))
            .collect();
        report.verdict("kostant_total", bad);
    }
    report.weyl = Some(WeylSection {
        root_type: par.root().kind().to_string(),
        levi: r.instance.levi.clone(),
        k: k.iter().map(|i| i + 1).collect(),
        counts,
        kostant: tables,
    });
    Ok(report.finish())
}

/// Runs a parsed command; `InputError`s in the chain mean bad input.
pub fn execute(cmd: &Command) -> anyhow::Result<(Report, Resolved)> {
    let r = cmd.common().resolve()?;
    let report = match cmd {
        Command::Cohomology(_) => run_cohomology(&r)?,
        Command::Spectral(_) => run_spectral(&r)?,
        Command::BkVerify(b) => run_bk(&r, b.quick)?,
        Command::Weyl(w) => run_weyl(&r, w.kostant)?,
    };
    Ok((report, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(std::iter::once("hsc").chain(args.iter().copied())).unwrap().command
    }

    #[test]
    fn flags_resolve() {
        let cmd = parse(&["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1", "--seed", "3"]);
        let r = cmd.common().resolve().unwrap();
        assert_eq!(r.instance.t_support, vec![1]);
        assert!(r.instance.levi.is_empty());
        assert_eq!(r.seed, 3);
        assert_eq!(r.sample_limit, DEFAULT_SAMPLE_LIMIT);
    }

    #[test]
    fn weyl_a2() {
        let (rep, _) = execute(&parse(&["weyl", "--preset", "A2", "--levi", ""])).unwrap();
        let w = rep.weyl.unwrap();
        assert_eq!((w.counts.order, w.counts.min_coset_reps), (6, 6));
        assert!(rep.passed);
    }

    #[test]
    fn bad_preset_is_input_error() {
        let err = execute(&parse(&["weyl", "--preset", "Q9"])).unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some());
        let err = execute(&parse(&["weyl", "--preset", "A2", "--levi", "5"])).unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some());
    }
}

//! Classical operations: Kraus maps, randomized classicality certification
//! against a classical family, and monotonicity harnesses.

use rand::Rng;
use rayon::prelude::*;

use crate::classify::{
    is_incoherent, is_separable_2x2, is_zero_bd_discord, is_zero_discord, make_cq, make_incoherent, make_separable,
    BasisSpec,
};
use crate::error::{Error, Result};
use crate::measures::{bd_discord_skew_with, coherence_skew, discord_skew, entanglement_skew, GeneratorSpectrum};
use crate::optim::Budget;
use crate::qcore::linalg::*;
use crate::qcore::random::{random_distribution_with, random_state_with, random_unitary_with, Seed};
use crate::qcore::state::{DensityMatrix, Dims};

/// Completeness tolerance `‖Σ K†K − I‖`.
pub const TOL_CPTP: f64 = 1e-9;
/// Branches with smaller probability are skipped in post-selected checks.
pub const BRANCH_CUTOFF: f64 = 1e-12;
/// Default number of sampled classical states.
pub const DEFAULT_TRIALS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dims: Dims,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(dims: Dims, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let n = dims.total();
        if kraus.is_empty() {
            return Err(Error::NotCptp { residual: 1.0 });
        }
        if let Some(k) = kraus.iter().find(|k| k.nrows() != n || k.ncols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{}, dims {dims} need {n}x{n}",
                k.nrows(),
                k.ncols()
            )));
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let residual = max_abs_diff(&sum, &identity(n));
        if residual > TOL_CPTP {
            return Err(Error::NotCptp { residual });
        }
        Ok(Self { dims, kraus })
    }

    pub fn identity(dims: Dims) -> Self {
        Self { dims, kraus: vec![identity(dims.total())] }
    }

    pub fn unitary(dims: Dims, u: ComplexMatrix) -> Result<Self> {
        Self::new(dims, vec![u])
    }

    /// `U ⊗ I_B`.
    pub fn local_unitary_a(dims: Dims, u: &ComplexMatrix) -> Result<Self> {
        Self::new(dims, vec![kron(u, &identity(dims.b))])
    }

    /// `I_A ⊗ V`.
    pub fn local_unitary_b(dims: Dims, v: &ComplexMatrix) -> Result<Self> {
        Self::new(dims, vec![kron(&identity(dims.a), v)])
    }

    /// Kraus operators `|j⟩⟨j| ⊗ I_B` in `basis`.
    pub fn dephase_a(dims: Dims, basis: &BasisSpec) -> Result<Self> {
        check_basis(dims, basis)?;
        Ok(Self { dims, kraus: (0..dims.a).map(|j| kron(&basis.projector(j), &identity(dims.b))).collect() })
    }

    /// `(1-p) ρ + p · dephase_A(ρ)`.
    pub fn partial_dephase_a(dims: Dims, basis: &BasisSpec, p: f64) -> Result<Self> {
        check_basis(dims, basis)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadDistribution(format!("mixing weight {p} outside [0, 1]")));
        }
        let mut kraus = vec![identity(dims.total()) * c((1.0 - p).sqrt(), 0.0)];
        kraus.extend((0..dims.a).map(|j| kron(&basis.projector(j), &identity(dims.b)) * c(p.sqrt(), 0.0)));
        Ok(Self { dims, kraus })
    }

    /// `(1-p) ρ + p I/d` via the Weyl operators `X^a Z^b`.
    pub fn depolarizing(dims: Dims, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadDistribution(format!("depolarizing weight {p} outside [0, 1]")));
        }
        let d = dims.total();
        let shift = ComplexMatrix::from_fn(d, d, |r, s| if r == (s + 1) % d { ONE } else { ZERO });
        let omega = std::f64::consts::TAU / d as f64;
        let clock = ComplexMatrix::from_fn(d, d, |r, s| if r == s { C64::from_polar(1.0, omega * r as f64) } else { ZERO });
        let mut kraus = vec![identity(d) * c((1.0 - p).sqrt(), 0.0)];
        let weight = c((p / (d * d) as f64).sqrt(), 0.0);
        let mut xa = identity(d);
        for _ in 0..d {
            let mut zb = identity(d);
            for _ in 0..d {
                kraus.push(&xa * &zb * weight);
                zb = &zb * &clock;
            }
            xa = &xa * &shift;
        }
        Ok(Self { dims, kraus })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }
}

fn check_basis(dims: Dims, basis: &BasisSpec) -> Result<()> {
    if basis.dim() != dims.a {
        return Err(Error::DimensionMismatch(format!("basis of dimension {} for dims {dims}", basis.dim())));
    }
    Ok(())
}

fn check_dims(ch: &KrausChannel, rho: &DensityMatrix) -> Result<()> {
    if ch.dims != rho.dims() {
        return Err(Error::DimensionMismatch(format!("channel on {} applied to state on {}", ch.dims, rho.dims())));
    }
    Ok(())
}

/// `Σ K ρ K†`.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(ch, rho)?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in &ch.kraus {
        out += k * rho.matrix() * k.adjoint();
    }
    // completeness holds to 1e-9, so renormalize away the residual drift
    DensityMatrix::from_unnormalized(rho.dims(), out)
}

/// Unnormalized branch `K ρ K†` and its probability.
fn branch(k: &ComplexMatrix, rho: &DensityMatrix) -> (f64, ComplexMatrix) {
    let out = k * rho.matrix() * k.adjoint();
    (trace(&out).re, out)
}

/// Removes the off-diagonal A-blocks in `basis`.
pub fn dephase_a(rho: &DensityMatrix, basis: &BasisSpec) -> Result<DensityMatrix> {
    let dims = rho.dims();
    check_basis(dims, basis)?;
    let mut out = ComplexMatrix::zeros(dims.total(), dims.total());
    for j in 0..dims.a {
        let p = kron(&basis.projector(j), &identity(dims.b));
        out += &p * rho.matrix() * &p;
    }
    Ok(DensityMatrix::from_trusted(dims, out))
}

/// Classical state families a channel may be required to preserve.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalFamily {
    /// Diagonal states of a single system (`d_B = 1`).
    Incoherent(BasisSpec),
    /// Classical-quantum states in a fixed A-basis.
    ZeroBdDiscord(BasisSpec),
    /// Classical-quantum states in some A-basis.
    ZeroDiscord,
    Separable,
}

impl ClassicalFamily {
    fn validate(&self, dims: Dims) -> Result<()> {
        match self {
            ClassicalFamily::Incoherent(b) => {
                if dims.b != 1 {
                    return Err(Error::DimensionMismatch(format!("incoherent family needs d_B = 1, got {dims}")));
                }
                check_basis(dims, b)
            }
            ClassicalFamily::ZeroBdDiscord(b) => check_basis(dims, b),
            ClassicalFamily::ZeroDiscord => {
                if dims.a > 4 {
                    return Err(Error::UnsupportedDims(dims));
                }
                Ok(())
            }
            ClassicalFamily::Separable => is_separable_2x2(&DensityMatrix::maximally_mixed(dims)).map(|_| ()),
        }
    }

    /// Sample `index`: the first trials walk the extreme points, the rest are
    /// random mixtures.
    fn sample(&self, dims: Dims, index: usize, seed: Seed) -> DensityMatrix {
        let mut rng = seed.split(index as u64).rng();
        let (da, db) = (dims.a, dims.b);
        let extreme = |j: usize| -> Vec<f64> { (0..da).map(|k| if k == j % da { 1.0 } else { 0.0 }).collect() };
        let probs = if index < da { extreme(index) } else { random_distribution_with(&mut rng, da) };
        let mut b_states = || -> Vec<DensityMatrix> {
            (0..da)
                .map(|_| {
                    let rank = rng.random_range(1..=db);
                    random_state_with(&mut rng, Dims::single(db), rank).expect("rank within dimension")
                })
                .collect()
        };
        let built = match self {
            ClassicalFamily::Incoherent(b) => make_incoherent(&probs, b),
            ClassicalFamily::ZeroBdDiscord(b) => {
                let bs = b_states();
                make_cq(&probs, b, &bs)
            }
            ClassicalFamily::ZeroDiscord => {
                let bs = b_states();
                let basis = BasisSpec::from_trusted(random_unitary_with(&mut rng, da));
                make_cq(&probs, &basis, &bs)
            }
            ClassicalFamily::Separable => {
                let terms = if index < da { 1 } else { rng.random_range(1..=4) };
                let w = random_distribution_with(&mut rng, terms);
                let mut local = |d: usize| -> DensityMatrix {
                    let rank = if index < da { 1 } else { rng.random_range(1..=d) };
                    random_state_with(&mut rng, Dims::single(d), rank).expect("rank within dimension")
                };
                let a: Vec<_> = (0..terms).map(|_| local(da)).collect();
                let b: Vec<_> = (0..terms).map(|_| local(db)).collect();
                make_separable(&w, &a, &b)
            }
        };
        built.expect("sampled classical states are valid").with_dims(dims).expect("same total dimension")
    }

    fn contains(&self, rho: &DensityMatrix, seed: Seed) -> Result<bool> {
        Ok(match self {
            ClassicalFamily::Incoherent(b) => is_incoherent(rho, b)?.member,
            ClassicalFamily::ZeroBdDiscord(b) => is_zero_bd_discord(rho, b)?.member,
            ClassicalFamily::ZeroDiscord => is_zero_discord(rho, Budget::BASIS, seed)?.member,
            ClassicalFamily::Separable => is_separable_2x2(rho)?.member,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalityReport {
    /// Every output `Φ(σ)` stayed in the family.
    pub plain: bool,
    /// Every normalized branch `K σ K† / p` stayed in the family.
    pub post_selected: bool,
    pub trials: usize,
    /// First sample whose output left the family, if any.
    pub counterexample: Option<usize>,
}

impl ClassicalityReport {
    pub fn classical(&self) -> bool {
        self.plain
    }
}

/// Randomized certificate that `ch` maps the family into itself, both as a
/// whole and branch by branch.
pub fn is_classical_operation(
    ch: &KrausChannel,
    family: &ClassicalFamily,
    trials: usize,
    seed: Seed,
) -> Result<ClassicalityReport> {
    let dims = ch.dims;
    family.validate(dims)?;
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(bool, bool)> {
            let sigma = family.sample(dims, i, seed);
            let check_seed = seed.split(u64::MAX - i as u64);
            let plain = family.contains(&apply_channel(ch, &sigma)?, check_seed)?;
            let mut post = true;
            for k in &ch.kraus {
                let (p, out) = branch(k, &sigma);
                if p > BRANCH_CUTOFF && !family.contains(&DensityMatrix::from_trusted(dims, out / c(p, 0.0)), check_seed)? {
                    post = false;
                    break;
                }
            }
            Ok((plain, post))
        })
        .collect::<Result<_>>()?;
    Ok(ClassicalityReport {
        plain: outcomes.iter().all(|o| o.0),
        post_selected: outcomes.iter().all(|o| o.1),
        trials,
        counterexample: outcomes.iter().position(|o| !o.0),
    })
}

/// Quantumness measure under test; each is paired with the classical family
/// it vanishes on.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureId {
    /// Skew coherence of `ρ_A` in the basis.
    Coherence(BasisSpec),
    BdDiscord(BasisSpec),
    Discord,
    Entanglement,
}

impl MeasureId {
    /// Allowed increase before a sample counts as a violation.
    pub fn slack(&self) -> f64 {
        match self {
            MeasureId::Coherence(_) | MeasureId::BdDiscord(_) => 1e-9,
            MeasureId::Discord => 1e-5,
            MeasureId::Entanglement => 5e-3,
        }
    }

    /// Classical family the channel must preserve. Coherence of `ρ_A` on a
    /// bipartite system is paired with the classical-quantum family, whose
    /// marginals are exactly the incoherent states.
    pub fn family(&self, dims: Dims) -> ClassicalFamily {
        match self {
            MeasureId::Coherence(b) if dims.b == 1 => ClassicalFamily::Incoherent(b.clone()),
            MeasureId::Coherence(b) | MeasureId::BdDiscord(b) => ClassicalFamily::ZeroBdDiscord(b.clone()),
            MeasureId::Discord => ClassicalFamily::ZeroDiscord,
            MeasureId::Entanglement => ClassicalFamily::Separable,
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix, seed: Seed) -> Result<f64> {
        let spectrum = GeneratorSpectrum::ramp(rho.dims().a);
        Ok(match self {
            MeasureId::Coherence(b) => coherence_skew(rho, b, &spectrum)?.value,
            MeasureId::BdDiscord(b) => bd_discord_skew_with(rho, b, &spectrum)?.value,
            MeasureId::Discord => discord_skew(rho, &spectrum, Budget::BASIS, seed)?.value,
            MeasureId::Entanglement => entanglement_skew(rho, &spectrum, None, Budget::ROOF, seed)?.value,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub trials: usize,
    pub slack: f64,
    /// `max(Q(Φ(ρ)) - Q(ρ))` over the samples (C2a).
    pub max_violation: f64,
    /// `max(Σ_n p_n Q(ρ_n) - Q(ρ))` over the samples (C2b).
    pub max_selective_violation: f64,
    pub violations: usize,
    pub selective_violations: usize,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.selective_violations == 0
    }
}

/// Samples for the classicality prerequisite of [`monotonicity_check`].
pub const PREREQ_TRIALS: usize = 100;

/// Checks that a classical operation never increases the measure, on
/// average (C2a) or branch-wise on average (C2b), over random states.
pub fn monotonicity_check(ch: &KrausChannel, measure: &MeasureId, trials: usize, seed: Seed) -> Result<MonotonicityReport> {
    let dims = ch.dims;
    let family = measure.family(dims);
    let prereq = is_classical_operation(ch, &family, PREREQ_TRIALS, seed.split(u64::MAX))?;
    if !prereq.plain {
        return Err(Error::PrereqFailed(format!(
            "channel is not classical for the {family:?} family (sample {})",
            prereq.counterexample.unwrap_or(0)
        )));
    }
    let slack = measure.slack();
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let s = seed.split(i as u64);
            let mut rng = s.rng();
            let rank = rng.random_range(1..=dims.total());
            let rho = random_state_with(&mut rng, dims, rank)?;
            let before = measure.evaluate(&rho, s)?;
            let after = measure.evaluate(&apply_channel(ch, &rho)?, s)?;
            let mut selective = 0.0;
            for k in &ch.kraus {
                let (p, out) = branch(k, &rho);
                if p > BRANCH_CUTOFF {
                    selective += p * measure.evaluate(&DensityMatrix::from_trusted(dims, out / c(p, 0.0)), s)?;
                }
            }
            Ok((after - before, selective - before))
        })
        .collect::<Result<_>>()?;
    let max = |f: fn(&(f64, f64)) -> f64| samples.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    Ok(MonotonicityReport {
        trials,
        slack,
        max_violation: max(|s| s.0),
        max_selective_violation: max(|s| s.1),
        violations: samples.iter().filter(|s| s.0 > slack).count(),
        selective_violations: samples.iter().filter(|s| s.1 > slack).count(),
    })
}

//! Entropic bounds on the program dimension of covariant processors.
//!
//! All logarithms are base 2. `ε` always denotes the half diamond distance
//! `½‖P(·⊗π_T) − T‖_⋄` a processor is allowed per target.

use serde::{Serialize, Serializer};

use crate::channel::{ChannelMap, ChoiState, ChannelTag};
use crate::commutant::{compress_map, AdaptedBasis, BlockStructure};
use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::{c64, hermitian_part, von_neumann_entropy, ComplexMatrix, DensityMatrix};
use crate::processor::Processor;

/// Allowed negative slack before a chain inequality counts as violated.
pub const CHAIN_TOLERANCE: f64 = 1e-6;

/// Label attached to reports so the meaning of `ε` is explicit.
pub const EPSILON_CONVENTION: &str = "half diamond distance per target";

/// `h(ε) = −ε log ε − (1−ε) log(1−ε)`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange(format!("binary entropy needs 0 <= eps <= 1, got {eps}")));
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(eps) + term(1.0 - eps))
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>, tol: f64) -> Result<Self> {
        let Some(first) = items.first() else {
            return Err(Error::InvalidState("empty ensemble".into()));
        };
        let d = first.1.dim();
        let mut total = 0.0;
        for (p, rho) in &items {
            if *p < -tol {
                return Err(Error::InvalidState(format!("negative probability {p}")));
            }
            if rho.dim() != d {
                return Err(dim_mismatch("ensemble member", d, rho.dim()));
            }
            total += p;
        }
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn average(&self) -> DensityMatrix {
        let d = self.dim();
        let avg = self
            .items
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, (p, rho)| acc + rho.matrix() * c64(*p, 0.0));
        DensityMatrix::new_unchecked(avg)
    }

    /// Pushes every member through `f`, keeping the weights.
    pub fn map<F>(&self, f: F) -> Result<Ensemble>
    where
        F: Fn(&DensityMatrix) -> Result<ComplexMatrix>,
    {
        let mut items = Vec::with_capacity(self.items.len());
        for (p, rho) in &self.items {
            items.push((*p, DensityMatrix::new_unchecked(hermitian_part(&f(rho)?))));
        }
        Ok(Ensemble { items })
    }
}

/// `χ = S(Σ p_i ρ_i) − Σ p_i S(ρ_i)`, clamped at zero.
pub fn holevo_information(e: &Ensemble, tol: f64) -> Result<f64> {
    let mut chi = von_neumann_entropy(&e.average(), tol)?;
    for (p, rho) in e.items() {
        chi -= p * von_neumann_entropy(rho, tol)?;
    }
    Ok(chi.max(0.0))
}

fn check_layout(bs: &BlockStructure, basis: &AdaptedBasis) -> Result<()> {
    if basis.structure() != bs {
        return Err(dim_mismatch(
            "adapted basis layout",
            format!("{:?}", basis.structure().blocks),
            format!("{:?}", bs.blocks),
        ));
    }
    Ok(())
}

/// Covariant channels `c_(k,j) = S(0 ⊕ (𝟙_{b_k}/b_k)⊗|j><j| ⊕ 0)S*`, each with
/// weight `(n_k/d_c)·(1/n_k) = 1/d_c`.
pub fn one_design_channels(bs: &BlockStructure, basis: &AdaptedBasis) -> Result<Vec<(f64, ChannelMap)>> {
    check_layout(bs, basis)?;
    let s = basis.unitary();
    let n = bs.total();
    let w = 1.0 / bs.d_c() as f64;
    let mut out = Vec::with_capacity(bs.d_c());
    for (blk, off) in bs.blocks.iter().zip(bs.offsets()) {
        for j in 0..blk.n {
            let mut z = ComplexMatrix::zeros(n, n);
            for i in 0..blk.b {
                let idx = off + i * blk.n + j;
                z[(idx, idx)] = c64(1.0 / blk.b as f64, 0.0);
            }
            let c = hermitian_part(&(s * z * s.adjoint()));
            out.push((
                w,
                ChannelMap::new(ChoiState::new_unchecked(c, bs.d1, bs.d2), ChannelTag::Custom),
            ));
        }
    }
    Ok(out)
}

/// The Choi states of [`one_design_channels`] as an ensemble; its average
/// is `⊕_k (𝟙_{b_k}/b_k)⊗𝟙_{n_k} / d_c` in the adapted basis.
pub fn one_design_ensemble(bs: &BlockStructure, basis: &AdaptedBasis) -> Result<Ensemble> {
    let items = one_design_channels(bs, basis)?
        .into_iter()
        .map(|(p, t)| (p, t.choi().as_state()))
        .collect();
    Ensemble::new(items, 1e-12)
}

fn check_eps(eps: f64, lo_open: bool) -> Result<()> {
    let ok = if lo_open { eps > 0.0 && eps < 1.0 } else { (0.0..1.0).contains(&eps) };
    if !ok || eps.is_nan() {
        let range = if lo_open { "(0, 1)" } else { "[0, 1)" };
        return Err(Error::OutOfRange(format!("eps must lie in {range}, got {eps}")));
    }
    Ok(())
}

/// `d_c^{1−2ε} / 2^{2h(ε)}`.
pub fn lower_bound_from_dc(eps: f64, d_c: usize) -> Result<f64> {
    check_eps(eps, false)?;
    let h = binary_entropy(eps)?;
    Ok((d_c as f64).powf(1.0 - 2.0 * eps) / 2f64.powf(2.0 * h))
}

pub fn lower_bound(eps: f64, bs: &BlockStructure) -> Result<f64> {
    lower_bound_from_dc(eps, bs.d_c())
}

/// Size bound `(1 + 2/ε)^n` for an `ε`-net of a unit ball in `R^n`.
pub fn net_cardinality(eps: f64, n: usize) -> Result<f64> {
    check_eps(eps, true)?;
    let base = 1.0 + 2.0 / eps;
    Ok(match i32::try_from(n) {
        Ok(k) => base.powi(k),
        Err(_) => base.powf(n as f64),
    })
}

/// `(1 + 2/ε)^{d_n}`.
pub fn upper_bound_net(eps: f64, bs: &BlockStructure) -> Result<f64> {
    net_cardinality(eps, bs.d_n())
}

fn na_when_none<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("n/a"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub epsilon: f64,
    pub epsilon_convention: &'static str,
    pub d_c: usize,
    pub d_n: usize,
    pub lower_bound: f64,
    pub lower_bound_ceil: u64,
    /// Absent at `ε = 0`, where the net bound is undefined.
    #[serde(serialize_with = "na_when_none")]
    pub upper_bound_net: Option<f64>,
    /// Program dimension of the exact compressed processor, `d_c`.
    pub exact_dp: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holevo_chain: Option<ChainReport>,
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str = "epsilon,d_c,d_n,lower,upper,exact";

    pub fn csv_row(&self) -> String {
        let upper = self
            .upper_bound_net
            .map(|u| format!("{u}"))
            .unwrap_or_else(|| "n/a".into());
        format!(
            "{},{},{},{},{},{}",
            self.epsilon, self.d_c, self.d_n, self.lower_bound, upper, self.exact_dp
        )
    }
}

pub fn bounds_report(eps: f64, bs: &BlockStructure) -> Result<BoundsReport> {
    let lower = lower_bound(eps, bs)?;
    let upper = if eps == 0.0 { None } else { Some(upper_bound_net(eps, bs)?) };
    Ok(BoundsReport {
        epsilon: eps,
        epsilon_convention: EPSILON_CONVENTION,
        d_c: bs.d_c(),
        d_n: bs.d_n(),
        lower_bound: lower,
        lower_bound_ceil: (lower - 1e-12).ceil().max(0.0) as u64,
        upper_bound_net: upper,
        exact_dp: bs.d_c(),
        holevo_chain: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStage {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; negative values beyond tolerance are violations.
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub epsilon: f64,
    pub log2_dp: f64,
    /// `χ` of the program states `π_T`.
    pub chi_program: f64,
    /// `χ` of the Choi states of the implemented channels `P(·⊗π_T)`.
    pub chi_implemented: f64,
    /// `χ` after compressing the implemented Choi states.
    pub chi_compressed_implemented: f64,
    /// `χ` of the compressed target Choi states, `log2 d_c` for the 1-design.
    pub chi_compressed_target: f64,
    /// `2ε log2 d_c + 2h(ε)`.
    pub continuity_slack: f64,
    pub stages: Vec<ChainStage>,
    pub min_slack: f64,
}

/// Evaluates
/// `log d_P ≥ χ(π) ≥ χ(c_ε) ≥ χ(C(c_ε)) ≥ χ(C(c_T)) − 2ε log d_c − 2h(ε)`
/// on the 1-design ensemble, where `c_ε` are the Choi states of the channels
/// the processor actually implements. `eps` is the accuracy the processor
/// is claimed to achieve.
pub fn verify_lower_bound_chain(
    p: &Processor,
    bs: &BlockStructure,
    basis: &AdaptedBasis,
    eps: f64,
) -> Result<ChainReport> {
    check_eps(eps, false)?;
    if p.d1() != bs.d1 || p.d2() != bs.d2 {
        return Err(dim_mismatch(
            "verify_lower_bound_chain",
            format!("({}, {})", bs.d1, bs.d2),
            format!("({}, {})", p.d1(), p.d2()),
        ));
    }
    let tol = 1e-9;
    let members = one_design_channels(bs, basis)?;
    let mut programs = Vec::with_capacity(members.len());
    let mut implemented = Vec::with_capacity(members.len());
    let mut compressed_impl = Vec::with_capacity(members.len());
    let mut compressed_target = Vec::with_capacity(members.len());
    for (w, t) in &members {
        let pi = p.program_for(t)?;
        let induced = p.induced_channel(&pi)?;
        let c_eps = compress_map(induced.choi_matrix(), basis, bs)?;
        let c_t = compress_map(t.choi_matrix(), basis, bs)?;
        programs.push((*w, pi.state().clone()));
        implemented.push((*w, induced.choi().as_state()));
        compressed_impl.push((*w, DensityMatrix::new_unchecked(hermitian_part(&c_eps))));
        compressed_target.push((*w, DensityMatrix::new_unchecked(hermitian_part(&c_t))));
    }
    let chi = |items: Vec<(f64, DensityMatrix)>| -> Result<f64> {
        holevo_information(&Ensemble::new(items, 1e-9)?, tol)
    };
    let chi_program = chi(programs)?;
    let chi_implemented = chi(implemented)?;
    let chi_ci = chi(compressed_impl)?;
    let chi_ct = chi(compressed_target)?;
    let continuity = 2.0 * eps * (bs.d_c() as f64).log2() + 2.0 * binary_entropy(eps)?;
    let log2_dp = (p.program_dim() as f64).log2();
    let stage = |name, lhs: f64, rhs: f64| ChainStage {
        name,
        lhs,
        rhs,
        slack: lhs - rhs,
    };
    let stages = vec![
        stage("dimension", log2_dp, chi_program),
        stage("processing", chi_program, chi_implemented),
        stage("compression", chi_implemented, chi_ci),
        stage("continuity", chi_ci, chi_ct - continuity),
    ];
    let min_slack = stages.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min);
    if let Some(bad) = stages.iter().find(|s| s.slack < -CHAIN_TOLERANCE) {
        return Err(Error::ChainViolation {
            stage: bad.name.to_string(),
            slack: bad.slack,
        });
    }
    Ok(ChainReport {
        epsilon: eps,
        log2_dp,
        chi_program,
        chi_implemented,
        chi_compressed_implemented: chi_ci,
        chi_compressed_target: chi_ct,
        continuity_slack: continuity,
        stages,
        min_slack,
    })
}

//! Channels stored as Choi matrices `c_T = (id⊗T)(|Ω><Ω|)` on `H1⊗H2`,
//! input factor first.
//!
//! With this convention `T(ρ) = d1 · tr_1[(ρᵀ⊗𝟙) c_T]`, and `T` is
//! `(U, V)`-covariant exactly when `c_T` commutes with every `Ū_g⊗V_g`.

pub mod a4;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commutant::project_to_commutant;
use crate::error::{dim_mismatch, Error, Result};
use crate::group::{bar_tensor_rep, character_of, char_inner, Representation};
use crate::matrix::{
    c64, commutator, eigh, flip, from_pairs, ginibre, hermitian_part, identity, is_hermitian,
    matrix_unit, max_abs, maximally_entangled_state, min_eigenvalue, partial_trace, rank,
    to_pairs, trace_norm, ComplexMatrix, DensityMatrix, Subsystem, Tolerance,
};

/// A validated Choi state of a CPTP map `B(C^{d1}) → B(C^{d2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    matrix: ComplexMatrix,
    d1: usize,
    d2: usize,
}

impl ChoiState {
    pub fn new(matrix: ComplexMatrix, d1: usize, d2: usize, tol: f64) -> Result<Self> {
        let report = is_cptp_choi(&matrix, d1, d2, tol)?;
        if !report.valid {
            return Err(Error::InvalidChannel(report.describe()));
        }
        Ok(Self {
            matrix: hermitian_part(&matrix),
            d1,
            d2,
        })
    }

    pub fn new_unchecked(matrix: ComplexMatrix, d1: usize, d2: usize) -> Self {
        Self { matrix, d1, d2 }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// The Choi matrix as a bipartite density matrix.
    pub fn as_state(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.matrix.clone())
    }
}

/// Closed form a channel was built from, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelTag {
    Identity,
    Depolarizing { alpha: f64 },
    WernerHolevo,
    A4Unitary { j: usize },
    A4Bloch { lambda: [f64; 3] },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMap {
    choi: ChoiState,
    tag: ChannelTag,
}

impl ChannelMap {
    pub fn new(choi: ChoiState, tag: ChannelTag) -> Self {
        Self { choi, tag }
    }

    pub fn from_choi(matrix: ComplexMatrix, d1: usize, d2: usize, tol: f64) -> Result<Self> {
        Ok(Self::new(ChoiState::new(matrix, d1, d2, tol)?, ChannelTag::Custom))
    }

    pub fn from_kraus(kraus: &[ComplexMatrix], d1: usize, d2: usize, tol: f64) -> Result<Self> {
        Ok(Self::new(choi_of_kraus(kraus, d1, d2, tol)?, ChannelTag::Custom))
    }

    pub fn identity(d: usize) -> Self {
        Self::new(
            ChoiState::new_unchecked(maximally_entangled_state(d), d, d),
            ChannelTag::Identity,
        )
    }

    pub fn choi(&self) -> &ChoiState {
        &self.choi
    }

    pub fn choi_matrix(&self) -> &ComplexMatrix {
        &self.choi.matrix
    }

    pub fn tag(&self) -> &ChannelTag {
        &self.tag
    }

    pub fn d1(&self) -> usize {
        self.choi.d1
    }

    pub fn d2(&self) -> usize {
        self.choi.d2
    }

    pub fn kraus(&self, tol: f64) -> Result<Vec<ComplexMatrix>> {
        kraus_of_choi(&self.choi.matrix, self.d1(), self.d2(), tol)
    }

    /// Applies the channel to an arbitrary operator (linear extension).
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply_choi(&self.choi.matrix, self.d1(), self.d2(), x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChannelMap) -> Result<ChannelMap> {
        if other.d1() != self.d2() {
            return Err(dim_mismatch("then", self.d2(), other.d1()));
        }
        let c = choi_of_map(self.d1(), other.d2(), |x| other.apply(&self.apply(x)?))?;
        Ok(Self::new(
            ChoiState::new_unchecked(c, self.d1(), other.d2()),
            ChannelTag::Custom,
        ))
    }

    /// Distance between the stored Choi matrix and the one rebuilt from the
    /// tag's closed-form action; `None` for untagged channels.
    pub fn closed_form_residual(&self) -> Option<f64> {
        let d = self.d1();
        let action: Box<dyn Fn(&ComplexMatrix) -> ComplexMatrix> = match &self.tag {
            ChannelTag::Custom | ChannelTag::A4Bloch { .. } => return None,
            ChannelTag::Identity => Box::new(|x| x.clone()),
            ChannelTag::Depolarizing { alpha } => {
                let a = *alpha;
                Box::new(move |x| {
                    identity(d) * (x.trace() * a / d as f64) + x * c64(1.0 - a, 0.0)
                })
            }
            ChannelTag::WernerHolevo => Box::new(move |x| {
                (identity(d) * x.trace() - x.transpose()) * c64(1.0 / (d as f64 - 1.0), 0.0)
            }),
            ChannelTag::A4Unitary { j } => {
                let v = (0..*j).fold(identity(3), |acc, _| acc * a4::intertwiner());
                Box::new(move |x| &v * x * v.adjoint())
            }
        };
        let rebuilt = choi_of_map(d, self.d2(), |x| Ok(action(x))).ok()?;
        Some(trace_norm(&(rebuilt - self.choi_matrix())))
    }

    pub fn to_document(&self) -> ChannelDocument {
        ChannelDocument {
            d1: self.d1(),
            d2: self.d2(),
            tag: Some(self.tag.clone()),
            choi: to_pairs(self.choi_matrix()),
        }
    }

    pub fn from_document(doc: &ChannelDocument, tol: f64) -> Result<Self> {
        let n = doc.d1 * doc.d2;
        let m = from_pairs(n, n, &doc.choi)?;
        let choi = ChoiState::new(m, doc.d1, doc.d2, tol)?;
        Ok(Self::new(choi, doc.tag.clone().unwrap_or(ChannelTag::Custom)))
    }
}

/// JSON form of a channel: the Choi matrix as row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub d1: usize,
    pub d2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<ChannelTag>,
    pub choi: Vec<[f64; 2]>,
}

/// Choi matrix of an arbitrary linear map given by its action:
/// `(1/d1) Σ_ij |i><j| ⊗ f(|i><j|)`.
pub fn choi_of_map<F>(d1: usize, d2: usize, f: F) -> Result<ComplexMatrix>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let mut c = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    let w = c64(1.0 / d1 as f64, 0.0);
    for i in 0..d1 {
        for j in 0..d1 {
            let out = f(&matrix_unit(d1, i, j))?;
            if out.nrows() != d2 || out.ncols() != d2 {
                return Err(dim_mismatch("choi_of_map", format!("{d2}x{d2}"), format!("{}x{}", out.nrows(), out.ncols())));
            }
            c.view_mut((i * d2, j * d2), (d2, d2)).copy_from(&(out * w));
        }
    }
    Ok(c)
}

fn kraus_completeness(kraus: &[ComplexMatrix], d1: usize) -> ComplexMatrix {
    kraus
        .iter()
        .fold(ComplexMatrix::zeros(d1, d1), |acc, k| acc + k.adjoint() * k)
}

pub fn choi_of_kraus(kraus: &[ComplexMatrix], d1: usize, d2: usize, tol: f64) -> Result<ChoiState> {
    for k in kraus {
        if k.nrows() != d2 || k.ncols() != d1 {
            return Err(dim_mismatch(
                "choi_of_kraus",
                format!("{d2}x{d1}"),
                format!("{}x{}", k.nrows(), k.ncols()),
            ));
        }
    }
    let residual = max_abs(&(kraus_completeness(kraus, d1) - identity(d1)));
    if residual > tol {
        return Err(Error::NotTracePreserving { residual });
    }
    let mut c = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    let s = c64(1.0 / (d1 as f64).sqrt(), 0.0);
    for k in kraus {
        // (𝟙⊗K)|Ω> has entry K[b,i]/√d1 at i*d2+b
        let v = ComplexMatrix::from_fn(d1 * d2, 1, |r, _| k[(r % d2, r / d2)] * s);
        c += &v * v.adjoint();
    }
    Ok(ChoiState::new_unchecked(hermitian_part(&c), d1, d2))
}

/// Kraus operators from the spectral decomposition of the Choi matrix;
/// eigenvalues in `[-tol, 1e-14]` are dropped.
pub fn kraus_of_choi(c: &ComplexMatrix, d1: usize, d2: usize, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let n = d1 * d2;
    if c.nrows() != n || c.ncols() != n {
        return Err(dim_mismatch("kraus_of_choi", format!("{n}x{n}"), format!("{}x{}", c.nrows(), c.ncols())));
    }
    let (vals, vecs) = eigh(&hermitian_part(c));
    let mut out = Vec::new();
    for (idx, &l) in vals.iter().enumerate() {
        if l < -tol {
            return Err(Error::NegativeEigenvalue { value: l });
        }
        if l <= 1e-14 {
            continue;
        }
        let s = c64((l * d1 as f64).sqrt(), 0.0);
        let v = vecs.column(idx);
        out.push(ComplexMatrix::from_fn(d2, d1, |b, i| v[i * d2 + b] * s));
    }
    Ok(out)
}

/// `d1 · tr_1[(xᵀ⊗𝟙) c]` for any operator `x` on the input space.
pub fn apply_choi(c: &ComplexMatrix, d1: usize, d2: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.nrows() != d1 || x.ncols() != d1 {
        return Err(dim_mismatch("apply_channel", format!("{d1}x{d1}"), format!("{}x{}", x.nrows(), x.ncols())));
    }
    let mut out = ComplexMatrix::zeros(d2, d2);
    for i in 0..d1 {
        for j in 0..d1 {
            let w = x[(i, j)];
            if w.norm() == 0.0 {
                continue;
            }
            out += c.view((i * d2, j * d2), (d2, d2)) * w;
        }
    }
    Ok(out * c64(d1 as f64, 0.0))
}

pub fn apply_channel(t: &ChannelMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let out = t.apply(rho.matrix())?;
    Ok(DensityMatrix::new_unchecked(hermitian_part(&out)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CptpReport {
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    pub trace_residual: f64,
    /// `max |tr_2 c − 𝟙/d1|`, zero exactly for trace-preserving maps.
    pub marginal_residual: f64,
    pub psd: bool,
    pub trace_one: bool,
    pub marginal_ok: bool,
    pub valid: bool,
}

impl CptpReport {
    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.psd {
            parts.push(format!(
                "not positive semidefinite (min eigenvalue {:e}, Hermiticity residual {:e})",
                self.min_eigenvalue, self.hermitian_residual
            ));
        }
        if !self.trace_one {
            parts.push(format!("trace off by {:e}", self.trace_residual));
        }
        if !self.marginal_ok {
            parts.push(format!("input marginal off by {:e}", self.marginal_residual));
        }
        parts.join("; ")
    }
}

pub fn is_cptp_choi(c: &ComplexMatrix, d1: usize, d2: usize, tol: f64) -> Result<CptpReport> {
    let n = d1 * d2;
    if c.nrows() != n || c.ncols() != n {
        return Err(dim_mismatch("is_cptp_choi", format!("{n}x{n}"), format!("{}x{}", c.nrows(), c.ncols())));
    }
    let hermitian_residual = max_abs(&(c - c.adjoint()));
    let min = min_eigenvalue(&hermitian_part(c));
    let trace_residual = (c.trace() - c64(1.0, 0.0)).norm();
    let marginal = partial_trace(c, (d1, d2), Subsystem::First)?;
    let marginal_residual = max_abs(&(marginal - identity(d1) * c64(1.0 / d1 as f64, 0.0)));
    let psd = is_hermitian(c, tol) && min >= -tol;
    let trace_one = trace_residual <= tol;
    let marginal_ok = marginal_residual <= tol;
    Ok(CptpReport {
        hermitian_residual,
        min_eigenvalue: min,
        trace_residual,
        marginal_residual,
        psd,
        trace_one,
        marginal_ok,
        valid: psd && trace_one && marginal_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub covariant: bool,
    /// `max_g ‖[c_T, Ū_g⊗V_g]‖₁`.
    pub max_residual: f64,
}

fn check_dims(t: &ChannelMap, d1: usize, d2: usize) -> Result<()> {
    if t.d1() != d1 || t.d2() != d2 {
        return Err(dim_mismatch(
            "channel registers",
            format!("({d1}, {d2})"),
            format!("({}, {})", t.d1(), t.d2()),
        ));
    }
    Ok(())
}

pub fn is_covariant(
    t: &ChannelMap,
    u: &Representation,
    v: &Representation,
    tol: f64,
) -> Result<CovarianceReport> {
    check_dims(t, u.dim(), v.dim())?;
    let w = bar_tensor_rep(u, v)?;
    let max_residual = w
        .matrices()
        .iter()
        .map(|wg| trace_norm(&commutator(t.choi_matrix(), wg)))
        .fold(0.0, f64::max);
    Ok(CovarianceReport {
        covariant: max_residual <= tol,
        max_residual,
    })
}

/// Covariance against explicit `(U, V)` pairs, for symmetries outside a
/// finite group (e.g. sampled elements of a continuous group).
pub fn is_covariant_under_pairs(
    t: &ChannelMap,
    pairs: &[(ComplexMatrix, ComplexMatrix)],
    tol: f64,
) -> Result<CovarianceReport> {
    let mut max_residual: f64 = 0.0;
    for (u, v) in pairs {
        check_dims(t, u.nrows(), v.nrows())?;
        let w = u.conjugate().kronecker(v);
        max_residual = max_residual.max(trace_norm(&commutator(t.choi_matrix(), &w)));
    }
    Ok(CovarianceReport {
        covariant: max_residual <= tol,
        max_residual,
    })
}

/// Channel with Choi matrix `project_to_commutant(c_T, Ū⊗V)`, i.e.
/// `(1/|G|) Σ_g V_g* T(U_g · U_g*) V_g`.
pub fn twirl_channel(t: &ChannelMap, u: &Representation, v: &Representation) -> Result<ChannelMap> {
    check_dims(t, u.dim(), v.dim())?;
    let w = bar_tensor_rep(u, v)?;
    let c = hermitian_part(&project_to_commutant(t.choi_matrix(), &w)?);
    Ok(ChannelMap::new(
        ChoiState::new_unchecked(c, t.d1(), t.d2()),
        ChannelTag::Custom,
    ))
}

fn require_irreducible(u: &Representation, tol: Tolerance) -> Result<()> {
    let chi = character_of(u);
    let norm = char_inner(&chi, &chi)?;
    if (norm - c64(1.0, 0.0)).norm() > tol.round {
        return Err(Error::NotIrreducible { norm: norm.re });
    }
    Ok(())
}

/// Twirl of a Wishart-random bipartite state. For irreducible `u` every
/// commutant state has maximally mixed input marginal, so the result is a
/// covariant channel.
pub fn random_covariant_channel(
    u: &Representation,
    v: &Representation,
    seed: u64,
    tol: Tolerance,
) -> Result<ChannelMap> {
    require_irreducible(u, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = DensityMatrix::random(u.dim() * v.dim(), &mut rng);
    let w = bar_tensor_rep(u, v)?;
    let c = hermitian_part(&project_to_commutant(rho.matrix(), &w)?);
    Ok(ChannelMap::new(ChoiState::new(c, u.dim(), v.dim(), tol.eq)?, ChannelTag::Custom))
}

/// Random channel from a Haar-like isometry. The Kraus rank is raised to
/// `⌈d1/d2⌉` when smaller, since no channel has fewer Kraus operators.
pub fn random_channel(d1: usize, d2: usize, kraus_rank: usize, seed: u64) -> ChannelMap {
    let kraus_rank = kraus_rank.max(d1.div_ceil(d2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre(d2 * kraus_rank, d1, &mut rng);
    let q = g.qr().q();
    let kraus: Vec<ComplexMatrix> = (0..kraus_rank)
        .map(|r| q.view((r * d2, 0), (d2, d1)).into_owned())
        .collect();
    ChannelMap::new(
        choi_of_kraus(&kraus, d1, d2, 1e-9).expect("isometry blocks are trace preserving"),
        ChannelTag::Custom,
    )
}

/// Two-sided bounds on `½‖A − B‖_⋄`, serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 2]")]
pub struct DistanceBounds {
    pub lo: f64,
    pub hi: f64,
}

impl From<DistanceBounds> for [f64; 2] {
    fn from(b: DistanceBounds) -> Self {
        [b.lo, b.hi]
    }
}

/// `lo = ½‖c_a − c_b‖₁`, `hi = (d1/2)‖c_a − c_b‖₁`.
pub fn channel_distance_bounds(a: &ChannelMap, b: &ChannelMap) -> Result<DistanceBounds> {
    check_dims(b, a.d1(), a.d2())?;
    let lo = 0.5 * trace_norm(&(a.choi_matrix() - b.choi_matrix()));
    Ok(DistanceBounds {
        lo,
        hi: a.d1() as f64 * lo,
    })
}

/// Channels with known closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogChannel {
    Identity { d: usize },
    /// `α tr(ρ) 𝟙/d + (1 − α) ρ`, `α ∈ [0, d²/(d²−1)]`.
    Depolarizing { d: usize, alpha: f64 },
    /// `((tr ρ)𝟙 − ρᵀ)/(d − 1)`.
    WernerHolevo { d: usize },
    /// `V^j ρ V^{*j}` on the `θ` space of `A4`.
    A4Unitary { j: usize },
    /// The channel with Choi matrix `J_λ`, `|λ| ≤ 1`.
    A4Bloch { lambda: [f64; 3] },
}

pub fn catalog_channel(which: CatalogChannel, tol: f64) -> Result<ChannelMap> {
    let (c, d1, d2, tag) = match which {
        CatalogChannel::Identity { d } => {
            if d == 0 {
                return Err(Error::OutOfRange("dimension must be positive".into()));
            }
            (maximally_entangled_state(d), d, d, ChannelTag::Identity)
        }
        CatalogChannel::Depolarizing { d, alpha } => {
            if d < 2 {
                return Err(Error::OutOfRange(format!("depolarizing needs d >= 2, got {d}")));
            }
            let max = (d * d) as f64 / (d * d - 1) as f64;
            if !(0.0..=max + tol).contains(&alpha) {
                return Err(Error::OutOfRange(format!("alpha {alpha} outside [0, {max}]")));
            }
            let n = d * d;
            let c = identity(n) * c64(alpha / n as f64, 0.0)
                + maximally_entangled_state(d) * c64(1.0 - alpha, 0.0);
            (c, d, d, ChannelTag::Depolarizing { alpha })
        }
        CatalogChannel::WernerHolevo { d } => {
            if d < 2 {
                return Err(Error::OutOfRange(format!("Werner-Holevo needs d >= 2, got {d}")));
            }
            let n = d * d;
            let c = (identity(n) - flip(d)) * c64(1.0 / (d * (d - 1)) as f64, 0.0);
            (c, d, d, ChannelTag::WernerHolevo)
        }
        CatalogChannel::A4Unitary { j } => {
            if j > 2 {
                return Err(Error::OutOfRange(format!("j must be 0, 1 or 2, got {j}")));
            }
            (a4::unitary_choi(j), 3, 3, ChannelTag::A4Unitary { j })
        }
        CatalogChannel::A4Bloch { lambda } => {
            let norm = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1.0 + tol {
                return Err(Error::OutOfRange(format!("|lambda| = {norm} exceeds 1")));
            }
            (a4::bloch_choi(lambda), 3, 3, ChannelTag::A4Bloch { lambda })
        }
    };
    Ok(ChannelMap::new(ChoiState::new(c, d1, d2, tol)?, tag))
}

/// Choi rank; the Kraus rank of the channel.
pub fn choi_rank(t: &ChannelMap, tol: f64) -> usize {
    rank(t.choi_matrix(), tol)
}

/// Kraus operators `(|i><j| − |j><i|)/√(d−1)`, `i < j`, of the
/// Werner–Holevo channel.
pub fn werner_holevo_kraus(d: usize) -> Vec<ComplexMatrix> {
    let s = c64(1.0 / ((d - 1) as f64).sqrt(), 0.0);
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            out.push((matrix_unit(d, i, j) - matrix_unit(d, j, i)) * s);
        }
    }
    out
}

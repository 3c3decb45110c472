//! Programmable processors `P: B(H1 ⊗ H_P) → B(H2)` implementing covariant
//! channels `T` as `P(· ⊗ π_T)`.
//!
//! A processor is stored as Kraus operators of shape `d2 × (d1·d_core)`,
//! input register first, acting after a trailing ancilla of dimension
//! `d_P / d_core` has been traced out of the program (the ancilla is only
//! nontrivial after purification). The full Choi matrix is only formed when
//! its side `d1·d_P·d2` is at most [`CHOI_LIMIT`].

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{
    choi_of_kraus, choi_of_map, channel_distance_bounds, ChannelMap, ChoiState, ChannelTag,
    DistanceBounds,
};
use crate::commutant::{compress_map, embed_kraus, AdaptedBasis, BlockStructure};
use crate::error::{dim_mismatch, Error, Result};
use crate::group::{bar_tensor_rep, char_inner, character_of, Representation};
use crate::matrix::{
    c64, eigh, hermitian_part, identity, max_abs, maximally_entangled_vector, partial_trace,
    sqrt_psd, trace_norm, Subsystem, ComplexMatrix, ComplexVector, DensityMatrix, Tolerance,
};
use crate::nnls::nnls;

/// Largest processor Choi side that is materialized.
pub const CHOI_LIMIT: usize = 256;

/// Residual threshold deciding membership in the convex hull of extremes.
pub const HULL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessorKind {
    Mp,
    Teleport,
    Compressed,
    Twirled,
    Purified,
}

impl ProcessorKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mp => "mp",
            Self::Teleport => "teleport",
            Self::Compressed => "compressed",
            Self::Twirled => "twirled",
            Self::Purified => "purified",
        }
    }
}

/// Mixed programs are the default; pure programs are opt-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProgramMode {
    #[default]
    Mixed,
    Pure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramState {
    state: DensityMatrix,
    pure: bool,
}

impl ProgramState {
    pub fn new(state: DensityMatrix) -> Self {
        let m = state.matrix();
        let purity = (m * m).trace().re;
        Self {
            pure: (purity - 1.0).abs() < 1e-9,
            state,
        }
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }
}

#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let povm = Self { elements };
        let residual = povm.completeness_residual();
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(povm)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `‖Σ_k E_k − 𝟙‖₁`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.elements[0].nrows();
        let sum = self
            .elements
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, e| acc + e);
        trace_norm(&(sum - identity(n)))
    }
}

#[derive(Debug, Clone)]
enum Assignment {
    /// `π_T = c_T`.
    Choi,
    /// `π_T = C(c_T)`.
    Compressed { basis: Box<AdaptedBasis> },
    /// `π_T = Σ x_k |k><k|` (or the pure `Σ √x_k |k>`).
    Convex { extremes: Vec<ChannelMap>, mode: ProgramMode },
    /// Canonical purification `vec(√π)` of the inner assignment.
    Purified { inner: Box<Assignment>, inner_dim: usize },
}

#[derive(Debug, Clone)]
pub struct Processor {
    kind: ProcessorKind,
    d1: usize,
    d_p: usize,
    d2: usize,
    /// Trailing program factor that is traced out before the Kraus map.
    ancilla: usize,
    kraus: Vec<ComplexMatrix>,
    assignment: Assignment,
    povm: Option<Povm>,
}

impl Processor {
    pub fn kind(&self) -> ProcessorKind {
        self.kind
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn program_dim(&self) -> usize {
        self.d_p
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Kraus operators acting on the input and the non-ancilla part of the
    /// program.
    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Kraus operators on the full `d1·d_P` input, ancilla included.
    pub fn full_kraus(&self) -> Vec<ComplexMatrix> {
        if self.ancilla == 1 {
            return self.kraus.clone();
        }
        let core = self.d1 * self.core_dim();
        let mut out = Vec::with_capacity(self.kraus.len() * self.ancilla);
        for l in &self.kraus {
            for j in 0..self.ancilla {
                let mut k = ComplexMatrix::zeros(self.d2, core * self.ancilla);
                for col in 0..core {
                    k.column_mut(col * self.ancilla + j).copy_from(&l.column(col));
                }
                out.push(k);
            }
        }
        out
    }

    fn core_dim(&self) -> usize {
        self.d_p / self.ancilla
    }

    fn kraus_sum(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d2, self.d2), |acc, l| acc + l * a * l.adjoint())
    }

    pub fn povm(&self) -> Option<&Povm> {
        self.povm.as_ref()
    }

    /// `max |Σ L*L − 𝟙|`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let n = self.d1 * self.core_dim();
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, l| acc + l.adjoint() * l);
        max_abs(&(sum - identity(n)))
    }

    /// `P(x ⊗ π)` for arbitrary operators `x` and `π`.
    pub fn apply(&self, x: &ComplexMatrix, program: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.nrows() != self.d1 || x.ncols() != self.d1 {
            return Err(dim_mismatch("processor input", self.d1, x.nrows()));
        }
        if program.nrows() != self.d_p || program.ncols() != self.d_p {
            return Err(dim_mismatch("processor program", self.d_p, program.nrows()));
        }
        let program = if self.ancilla == 1 {
            program.clone()
        } else {
            partial_trace(program, (self.core_dim(), self.ancilla), Subsystem::First)?
        };
        Ok(self.kraus_sum(&x.kronecker(&program)))
    }

    /// Applies the processor to a joint input–program operator.
    pub fn apply_joint(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.d1 * self.d_p;
        if a.nrows() != n || a.ncols() != n {
            return Err(dim_mismatch("processor joint input", n, a.nrows()));
        }
        if self.ancilla == 1 {
            return Ok(self.kraus_sum(a));
        }
        let core = self.d1 * self.core_dim();
        Ok(self.kraus_sum(&partial_trace(a, (core, self.ancilla), Subsystem::First)?))
    }

    /// The channel `P(· ⊗ π)`.
    pub fn induced_channel(&self, program: &ProgramState) -> Result<ChannelMap> {
        let c = choi_of_map(self.d1, self.d2, |x| self.apply(x, program.matrix()))?;
        Ok(ChannelMap::new(
            ChoiState::new_unchecked(hermitian_part(&c), self.d1, self.d2),
            ChannelTag::Custom,
        ))
    }

    /// Choi matrix of the whole processor, if its side is at most
    /// [`CHOI_LIMIT`].
    pub fn process_choi(&self) -> Option<ComplexMatrix> {
        let side = self.d1 * self.d_p * self.d2;
        if side > CHOI_LIMIT {
            return None;
        }
        choi_of_kraus(&self.full_kraus(), self.d1 * self.d_p, self.d2, f64::INFINITY)
            .ok()
            .map(|c| c.matrix().clone())
    }

    pub fn program_for(&self, t: &ChannelMap) -> Result<ProgramState> {
        if t.d1() != self.d1 || t.d2() != self.d2 {
            return Err(dim_mismatch(
                "program_for",
                format!("({}, {})", self.d1, self.d2),
                format!("({}, {})", t.d1(), t.d2()),
            ));
        }
        assign(&self.assignment, t).map(ProgramState::new)
    }

    /// `max_g ‖V_g P(A) V_g* − P((U_g⊗𝟙)A(U_g⊗𝟙)*)‖`, measured on the Choi
    /// matrix when it is materialized and on seeded random product states
    /// `A = ρ⊗σ` otherwise.
    pub fn covariance_residual(&self, u: &Representation, v: &Representation) -> Result<f64> {
        if u.dim() != self.d1 || v.dim() != self.d2 {
            return Err(dim_mismatch(
                "covariance_residual",
                format!("({}, {})", self.d1, self.d2),
                format!("({}, {})", u.dim(), v.dim()),
            ));
        }
        if let Some(c) = self.process_choi() {
            let one_p = identity(self.d_p);
            let mut worst: f64 = 0.0;
            for g in u.group().elements() {
                let w = u.matrix(g).kronecker(&one_p).conjugate().kronecker(v.matrix(g));
                worst = worst.max(trace_norm(&(&c * &w - &w * &c)));
            }
            return Ok(worst);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let probes: Vec<(DensityMatrix, DensityMatrix)> = (0..4)
            .map(|_| {
                let x = DensityMatrix::random(self.d1, &mut rng);
                (x, DensityMatrix::random(self.d_p, &mut rng))
            })
            .collect();
        let mut worst: f64 = 0.0;
        for g in u.group().elements() {
            let (ug, vg) = (u.matrix(g), v.matrix(g));
            for (x, y) in &probes {
                let lhs = vg * self.apply(x.matrix(), y.matrix())? * vg.adjoint();
                let rhs = self.apply(&(ug * x.matrix() * ug.adjoint()), y.matrix())?;
                worst = worst.max(trace_norm(&(lhs - rhs)));
            }
        }
        Ok(worst)
    }
}

fn assign(a: &Assignment, t: &ChannelMap) -> Result<DensityMatrix> {
    match a {
        Assignment::Choi => Ok(t.choi().as_state()),
        Assignment::Compressed { basis } => {
            let m = compress_map(t.choi_matrix(), basis, basis.structure())?;
            Ok(DensityMatrix::new_unchecked(hermitian_part(&m)))
        }
        Assignment::Convex { extremes, mode } => {
            let x = convex_weights(extremes, t)?;
            let k = x.len();
            let m = match mode {
                ProgramMode::Mixed => ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
                    k,
                    x.iter().map(|&w| c64(w, 0.0)),
                )),
                ProgramMode::Pure => {
                    let psi = ComplexVector::from_iterator(k, x.iter().map(|&w| c64(w.sqrt(), 0.0)));
                    &psi * psi.adjoint()
                }
            };
            Ok(DensityMatrix::new_unchecked(m))
        }
        Assignment::Purified { inner, inner_dim } => {
            let pi = assign(inner, t)?;
            let root = sqrt_psd(pi.matrix());
            let n = *inner_dim;
            // |ψ> = Σ_{a,j} √π[a,j] |a>|j>
            let psi = ComplexVector::from_fn(n * n, |r, _| root[(r / n, r % n)]);
            Ok(DensityMatrix::new_unchecked(&psi * psi.adjoint()))
        }
    }
}

/// Nonnegative weights with `Σ x_k c_k ≈ c_T`, renormalized to sum to one.
pub fn convex_weights(extremes: &[ChannelMap], t: &ChannelMap) -> Result<Vec<f64>> {
    let n = t.choi_matrix().len();
    let k = extremes.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, k);
    for (col, e) in extremes.iter().enumerate() {
        for (r, z) in e.choi_matrix().iter().enumerate() {
            a[(r, col)] = z.re;
            a[(n + r, col)] = z.im;
        }
    }
    let b = DVector::from_iterator(
        2 * n,
        t.choi_matrix().iter().map(|z| z.re).chain(t.choi_matrix().iter().map(|z| z.im)),
    );
    let x = nnls(&a, &b);
    let residual = (&a * &x - &b).norm();
    if residual > HULL_TOLERANCE {
        return Err(Error::OutsideConvexHull { residual });
    }
    let total: f64 = x.iter().sum();
    Ok(x.iter().map(|w| w / total).collect())
}

fn require_irreducible(u: &Representation, tol: Tolerance) -> Result<()> {
    let chi = character_of(u);
    let norm = char_inner(&chi, &chi)?;
    if (norm - c64(1.0, 0.0)).norm() > tol.round {
        return Err(Error::NotIrreducible { norm: norm.re });
    }
    Ok(())
}

/// Measure the program in the computational basis and apply the selected
/// extreme channel: `P(A⊗B) = Σ_k <k|B|k> T_k(A)`.
pub fn build_mp_processor(extremes: &[ChannelMap], mode: ProgramMode, tol: f64) -> Result<Processor> {
    let first = extremes
        .first()
        .ok_or_else(|| Error::OutOfRange("at least one extreme channel is required".into()))?;
    let (d1, d2, k) = (first.d1(), first.d2(), extremes.len());
    let mut kraus = Vec::new();
    for (idx, e) in extremes.iter().enumerate() {
        if e.d1() != d1 || e.d2() != d2 {
            return Err(dim_mismatch(
                "build_mp_processor",
                format!("({d1}, {d2})"),
                format!("({}, {})", e.d1(), e.d2()),
            ));
        }
        for op in e.kraus(tol)? {
            let mut l = ComplexMatrix::zeros(d2, d1 * k);
            for i in 0..d1 {
                l.column_mut(i * k + idx).copy_from(&op.column(i));
            }
            kraus.push(l);
        }
    }
    let povm = Povm::new(
        (0..k).map(|j| crate::matrix::matrix_unit(k, j, j)).collect(),
        tol,
    )?;
    Ok(Processor {
        kind: ProcessorKind::Mp,
        d1,
        d_p: k,
        d2,
        ancilla: 1,
        kraus,
        assignment: Assignment::Convex {
            extremes: extremes.to_vec(),
            mode,
        },
        povm: Some(povm),
    })
}

/// The extreme points of the covariant Choi states when the commutant is
/// abelian: `S (0 ⊕ 𝟙_{b_k}/b_k ⊕ 0) S*`, one per block.
pub fn derive_extremes_abelian(
    u: &Representation,
    v: &Representation,
    bs: &BlockStructure,
    basis: &AdaptedBasis,
    tol: Tolerance,
) -> Result<Vec<ChannelMap>> {
    if let Some(blk) = bs.blocks.iter().find(|b| b.n > 1) {
        return Err(Error::NonAbelianCommutant {
            label: blk.label.clone(),
            multiplicity: blk.n,
        });
    }
    require_irreducible(u, tol)?;
    let s = basis.unitary();
    let n = bs.total();
    let mut out = Vec::with_capacity(bs.k());
    for (blk, off) in bs.blocks.iter().zip(bs.offsets()) {
        let mut z = ComplexMatrix::zeros(n, n);
        for i in 0..blk.b {
            z[(off + i, off + i)] = c64(1.0 / blk.b as f64, 0.0);
        }
        out.push(ChannelMap::from_choi(s * z * s.adjoint(), u.dim(), v.dim(), tol.eq)?);
    }
    Ok(out)
}

/// `M_g = (d1²/|G|) |φ_g><φ_g|`, `φ_g = (𝟙⊗Ū_g)|Ω>`.
fn teleport_vectors(u: &Representation) -> Vec<ComplexVector> {
    let d1 = u.dim();
    let omega = maximally_entangled_vector(d1);
    u.matrices()
        .iter()
        .map(|ug| identity(d1).kronecker(&ug.conjugate()) * &omega)
        .collect()
}

/// Teleportation simulation with the Choi state as program: measure input
/// and first program half with `{M_g}`, then undo `V_g` on the output.
pub fn build_teleport_processor(u: &Representation, v: &Representation, tol: Tolerance) -> Result<Processor> {
    require_irreducible(u, tol)?;
    let w = bar_tensor_rep(u, v)?; // checks both reps share a group
    let (d1, d2) = (u.dim(), v.dim());
    let weight = (d1 * d1) as f64 * w.group().haar_weight();
    let phis = teleport_vectors(u);
    let povm = Povm::new(
        phis.iter().map(|p| p * p.adjoint() * c64(weight, 0.0)).collect(),
        tol.eq,
    )?;
    let scale = c64(weight.sqrt(), 0.0);
    let mut kraus = Vec::with_capacity(phis.len());
    for (g, phi) in phis.iter().enumerate() {
        // (<φ_g| ⊗ 𝟙_B) on A ⊗ A' ⊗ B
        let mut m = ComplexMatrix::zeros(d2, d1 * d1 * d2);
        for aa in 0..d1 * d1 {
            let c = phi[aa].conj();
            for b in 0..d2 {
                m[(b, aa * d2 + b)] = c;
            }
        }
        kraus.push(v.matrix(g).adjoint() * m * scale);
    }
    Ok(Processor {
        kind: ProcessorKind::Teleport,
        d1,
        d_p: d1 * d2,
        d2,
        ancilla: 1,
        kraus,
        assignment: Assignment::Choi,
        povm: Some(povm),
    })
}

/// Teleport processor preceded by the embedding `D` on the program, so the
/// program register shrinks to `Σ n_k`.
pub fn build_compressed_processor(
    u: &Representation,
    v: &Representation,
    bs: &BlockStructure,
    basis: &AdaptedBasis,
    tol: Tolerance,
) -> Result<Processor> {
    let tele = build_teleport_processor(u, v, tol)?;
    let d1 = u.dim();
    let embed = embed_kraus(basis, bs)?;
    let one = identity(d1);
    let mut kraus = Vec::with_capacity(tele.kraus.len() * embed.len());
    for l in &tele.kraus {
        for e in &embed {
            kraus.push(l * one.kronecker(e));
        }
    }
    Ok(Processor {
        kind: ProcessorKind::Compressed,
        d1,
        d_p: bs.d_c(),
        d2: v.dim(),
        ancilla: 1,
        kraus,
        assignment: Assignment::Compressed {
            basis: Box::new(basis.clone()),
        },
        povm: None,
    })
}

/// Replaces Kraus operators by the spectral ones of the process Choi
/// matrix when it is small enough, to keep twirled processors compact.
fn reduce_kraus(kraus: Vec<ComplexMatrix>, d_in: usize, d2: usize) -> Vec<ComplexMatrix> {
    if d_in * d2 > CHOI_LIMIT || kraus.len() <= d_in * d2 {
        return kraus;
    }
    let c = match choi_of_kraus(&kraus, d_in, d2, f64::INFINITY) {
        Ok(c) => c,
        Err(_) => return kraus,
    };
    let (vals, vecs) = eigh(c.matrix());
    let mut out = Vec::new();
    for (idx, &l) in vals.iter().enumerate() {
        if l <= 1e-15 {
            continue;
        }
        let s = c64((l * d_in as f64).sqrt(), 0.0);
        let col = vecs.column(idx);
        out.push(ComplexMatrix::from_fn(d2, d_in, |b, i| col[i * d2 + b] * s));
    }
    out
}

/// `P'(A) = (1/|G|) Σ_g V_g* P((U_g⊗𝟙)A(U_g⊗𝟙)*) V_g`.
pub fn twirl_processor(p: &Processor, u: &Representation, v: &Representation) -> Result<Processor> {
    if u.dim() != p.d1 || v.dim() != p.d2 {
        return Err(dim_mismatch(
            "twirl_processor",
            format!("({}, {})", p.d1, p.d2),
            format!("({}, {})", u.dim(), v.dim()),
        ));
    }
    bar_tensor_rep(u, v)?;
    let scale = c64(u.group().haar_weight().sqrt(), 0.0);
    let one_p = identity(p.core_dim());
    let mut kraus = Vec::with_capacity(p.kraus.len() * u.group().order());
    for g in u.group().elements() {
        let ug = u.matrix(g).kronecker(&one_p);
        let vg = v.matrix(g).adjoint();
        for l in &p.kraus {
            kraus.push(&vg * l * &ug * scale);
        }
    }
    Ok(Processor {
        kind: ProcessorKind::Twirled,
        d1: p.d1,
        d_p: p.d_p,
        d2: p.d2,
        ancilla: p.ancilla,
        kraus: reduce_kraus(kraus, p.d1 * p.core_dim(), p.d2),
        assignment: p.assignment.clone(),
        povm: p.povm.clone(),
    })
}

/// Adds a purifying register of the same size as the program and ignores
/// it; programs become `vec(√π)`.
pub fn purify_program(p: &Processor) -> Processor {
    Processor {
        kind: ProcessorKind::Purified,
        d1: p.d1,
        d_p: p.d_p * p.d_p,
        d2: p.d2,
        ancilla: p.ancilla * p.d_p,
        kraus: p.kraus.clone(),
        assignment: Assignment::Purified {
            inner: Box::new(p.assignment.clone()),
            inner_dim: p.d_p,
        },
        povm: None,
    }
}

/// `d_P · min{D, d_P}` with `D = d1²(d2² − 1) + 1`, the refined bound on the
/// program dimension needed for pure programs.
pub fn refined_purification_bound(d1: usize, d2: usize, d_p: usize) -> usize {
    let big_d = d1 * d1 * (d2 * d2 - 1) + 1;
    d_p * big_d.min(d_p)
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetReport {
    /// `max_ρ ½‖P(ρ⊗π_T) − T(ρ)‖₁` over the supplied states.
    pub max_trace_distance: f64,
    /// Bounds on the half diamond distance between `P(·⊗π_T)` and `T`.
    pub epsilon_bounds: DistanceBounds,
    pub program_pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub kind: ProcessorKind,
    #[serde(rename = "d_P")]
    pub d_p: usize,
    pub targets: Vec<TargetReport>,
    /// Largest state-wise trace distance over all targets; infinite when
    /// some target has no program.
    pub max_error: f64,
    /// Largest upper bound on the half diamond distance.
    pub max_epsilon_hi: f64,
}

pub fn verify_processor(p: &Processor, targets: &[ChannelMap], states: &[DensityMatrix]) -> VerificationReport {
    let mut reports = Vec::with_capacity(targets.len());
    for t in targets {
        reports.push(verify_target(p, t, states).unwrap_or_else(|e| TargetReport {
            max_trace_distance: f64::INFINITY,
            epsilon_bounds: DistanceBounds {
                lo: f64::INFINITY,
                hi: f64::INFINITY,
            },
            program_pure: false,
            error: Some(e.to_string()),
        }));
    }
    let max_error = reports.iter().map(|r| r.max_trace_distance).fold(0.0, f64::max);
    let max_epsilon_hi = reports.iter().map(|r| r.epsilon_bounds.hi).fold(0.0, f64::max);
    VerificationReport {
        kind: p.kind,
        d_p: p.d_p,
        targets: reports,
        max_error,
        max_epsilon_hi,
    }
}

fn verify_target(p: &Processor, t: &ChannelMap, states: &[DensityMatrix]) -> Result<TargetReport> {
    let program = p.program_for(t)?;
    let mut worst: f64 = 0.0;
    for rho in states {
        let out = p.apply(rho.matrix(), program.matrix())?;
        let want = t.apply(rho.matrix())?;
        worst = worst.max(0.5 * trace_norm(&(out - want)));
    }
    let induced = p.induced_channel(&program)?;
    Ok(TargetReport {
        max_trace_distance: worst,
        epsilon_bounds: channel_distance_bounds(&induced, t)?,
        program_pure: program.is_pure(),
        error: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{catalog_channel, CatalogChannel};

    #[test]
    fn mp_needs_extremes() {
        assert!(build_mp_processor(&[], ProgramMode::Mixed, 1e-9).is_err());
    }

    #[test]
    fn mp_rejects_mixed_dimensions() {
        let a = ChannelMap::identity(2);
        let b = ChannelMap::identity(3);
        assert!(build_mp_processor(&[a, b], ProgramMode::Mixed, 1e-9).is_err());
    }

    #[test]
    fn outside_hull_is_reported() {
        let id = ChannelMap::identity(2);
        let p = build_mp_processor(&[id], ProgramMode::Mixed, 1e-9).unwrap();
        let full = catalog_channel(CatalogChannel::Depolarizing { d: 2, alpha: 1.0 }, 1e-9).unwrap();
        assert!(matches!(p.program_for(&full), Err(Error::OutsideConvexHull { .. })));
        let report = verify_processor(&p, &[full], &[]);
        assert!(report.targets[0].error.is_some());
        assert!(report.max_error.is_infinite());
    }

    #[test]
    fn refined_bound_arithmetic() {
        assert_eq!(refined_purification_bound(3, 3, 5), 25);
        assert_eq!(refined_purification_bound(1, 2, 10), 40);
    }

    #[test]
    fn empty_verification() {
        let p = build_mp_processor(&[ChannelMap::identity(2)], ProgramMode::Mixed, 1e-9).unwrap();
        let r = verify_processor(&p, &[], &[]);
        assert!(r.targets.is_empty());
        assert_eq!(r.max_error, 0.0);
    }
}

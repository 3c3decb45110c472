//! Block structure of the commutant of `Ū⊗V` and the compression /
//! embedding channels between it and its multiplicity-free copy.
//!
//! With `Ū⊗V ≅ ⊕_k α_k ⊗ 𝟙_{n_k}` the commutant is `⊕_k 𝟙_{b_k} ⊗ M_{n_k}`
//! where `b_k = dim α_k`. The adapted basis orders each block with the irrep
//! index outer and the multiplicity index inner, so commutant elements are
//! literally block-diagonal with `b_k` repeated `n_k × n_k` blocks.

use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::group::{bar_tensor_rep, multiplicities, IrrepTable, Representation};
use crate::matrix::{c64, identity, max_abs, trace_norm, ComplexMatrix, ComplexVector, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub label: String,
    #[serde(skip)]
    pub irrep_index: usize,
    /// Dimension of the irrep.
    pub b: usize,
    /// Multiplicity, the dimension of the block of the commutant.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockStructure {
    pub d1: usize,
    pub d2: usize,
    pub blocks: Vec<Block>,
}

impl BlockStructure {
    /// Number of distinct irreps present.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// `Σ n_k`, the optimal exact program dimension.
    pub fn d_c(&self) -> usize {
        self.blocks.iter().map(|b| b.n).sum()
    }

    /// `Σ n_k²`, the dimension of the commutant.
    pub fn d_n(&self) -> usize {
        self.blocks.iter().map(|b| b.n * b.n).sum()
    }

    /// `Σ b_k n_k`, always `d1·d2`.
    pub fn total(&self) -> usize {
        self.blocks.iter().map(|b| b.b * b.n).sum()
    }

    /// Start of each block in the adapted basis of `H1⊗H2`.
    pub fn offsets(&self) -> Vec<usize> {
        running_sum(self.blocks.iter().map(|b| b.b * b.n))
    }

    /// Start of each block in the compressed space of dimension `d_c`.
    pub fn compressed_offsets(&self) -> Vec<usize> {
        running_sum(self.blocks.iter().map(|b| b.n))
    }
}

fn running_sum(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

/// All `n_k = 1`.
pub fn is_abelian(bs: &BlockStructure) -> bool {
    bs.blocks.iter().all(|b| b.n == 1)
}

/// Multiplicities of `Ū⊗V`, keeping only irreps that occur.
pub fn block_structure(
    u: &Representation,
    v: &Representation,
    irreps: &IrrepTable,
    tol: Tolerance,
) -> Result<BlockStructure> {
    let w = bar_tensor_rep(u, v)?;
    let mult = multiplicities(&w, irreps, tol)?;
    let blocks = mult
        .labels
        .iter()
        .enumerate()
        .filter(|&(i, _)| mult.counts[i] > 0)
        .map(|(i, label)| Block {
            label: label.clone(),
            irrep_index: i,
            b: mult.dims[i],
            n: mult.counts[i],
        })
        .collect();
    Ok(BlockStructure {
        d1: u.dim(),
        d2: v.dim(),
        blocks,
    })
}

/// Unitary `S` whose columns exhibit `S*(Ū_g⊗V_g)S = ⊕ α_k(g) ⊗ 𝟙_{n_k}`.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    unitary: ComplexMatrix,
    w: Representation,
    structure: BlockStructure,
}

impl AdaptedBasis {
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// The representation `Ū⊗V` this basis adapts to.
    pub fn representation(&self) -> &Representation {
        &self.w
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn unitarity_residual(&self) -> f64 {
        let n = self.unitary.nrows();
        max_abs(&(self.unitary.adjoint() * &self.unitary - identity(n)))
    }

    /// Expected block-diagonal image of `W_g` in the adapted basis.
    pub fn block_image(&self, g: usize, irreps: &IrrepTable) -> ComplexMatrix {
        let n = self.unitary.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (blk, off) in self.structure.blocks.iter().zip(self.structure.offsets()) {
            let alpha = irreps.irrep(blk.irrep_index).rep.matrix(g);
            let piece = alpha.kronecker(&identity(blk.n));
            out.view_mut((off, off), (blk.b * blk.n, blk.b * blk.n)).copy_from(&piece);
        }
        out
    }

    /// `max_g ‖S* W_g S − ⊕ α_k(g)⊗𝟙_{n_k}‖₁`.
    pub fn block_diagonal_residual(&self, irreps: &IrrepTable) -> f64 {
        self.w
            .group()
            .elements()
            .map(|g| {
                let rotated = self.unitary.adjoint() * self.w.matrix(g) * &self.unitary;
                trace_norm(&(rotated - self.block_image(g, irreps)))
            })
            .fold(0.0, f64::max)
    }

    /// Column `(k, i, m)` of `S`: block `k`, irrep index `i`, multiplicity `m`.
    pub fn column(&self, block: usize, i: usize, m: usize) -> ComplexVector {
        let blk = &self.structure.blocks[block];
        let idx = self.structure.offsets()[block] + i * blk.n + m;
        self.unitary.column(idx).into_owned()
    }
}

/// Orthonormal basis of the column space of `m`, built by column-pivoted
/// Gram–Schmidt with a second orthogonalization pass.
fn orthonormal_range(m: &ComplexMatrix, threshold: f64) -> Vec<ComplexVector> {
    let mut residual: Vec<ComplexVector> = m.column_iter().map(|c| c.into_owned()).collect();
    let mut basis: Vec<ComplexVector> = Vec::new();
    loop {
        let (best, norm) = residual
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= threshold || basis.len() == m.nrows() {
            break;
        }
        let mut q = residual[best].clone() / c64(norm, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&q);
                q -= b * p;
            }
        }
        let qn = q.norm();
        q /= c64(qn, 0.0);
        for c in residual.iter_mut() {
            let p = q.dotc(c);
            *c -= &q * p;
        }
        basis.push(q);
    }
    basis
}

/// Matrix unit `E^α_{ij} = (b_α/|G|) Σ_g conj(α(g)_{ij}) W_g`.
fn matrix_unit(w: &Representation, alpha: &Representation, i: usize, j: usize) -> ComplexMatrix {
    let n = w.dim();
    let scale = alpha.dim() as f64 * w.group().haar_weight();
    let mut e = ComplexMatrix::zeros(n, n);
    for g in w.group().elements() {
        e += w.matrix(g) * alpha.matrix(g)[(i, j)].conj();
    }
    e * c64(scale, 0.0)
}

const RANK_THRESHOLD: f64 = 1e-6;
const ORTHOGONALITY_LIMIT: f64 = 1e-8;

pub fn adapted_basis(
    u: &Representation,
    v: &Representation,
    irreps: &IrrepTable,
    tol: Tolerance,
) -> Result<AdaptedBasis> {
    let structure = block_structure(u, v, irreps, tol)?;
    let w = bar_tensor_rep(u, v)?;
    let dim = w.dim();
    let mut columns: Vec<ComplexVector> = Vec::with_capacity(dim);
    for blk in &structure.blocks {
        let alpha = &irreps.irrep(blk.irrep_index).rep;
        let seeds = orthonormal_range(&matrix_unit(&w, alpha, 0, 0), RANK_THRESHOLD);
        if seeds.len() != blk.n {
            return Err(Error::RankMismatch {
                label: blk.label.clone(),
                expected: blk.n,
                found: seeds.len(),
            });
        }
        for i in 0..blk.b {
            let partner = matrix_unit(&w, alpha, i, 0);
            for f in &seeds {
                columns.push(&partner * f);
            }
        }
    }
    let mut s = ComplexMatrix::from_columns(&columns);
    let residual = max_abs(&(s.adjoint() * &s - identity(dim)));
    if residual > ORTHOGONALITY_LIMIT {
        return Err(Error::LostOrthogonality { residual });
    }
    // polish: modified Gram–Schmidt in column order
    for c in 0..dim {
        for p in 0..c {
            let q = s.column(p).into_owned();
            let proj = q.dotc(&s.column(c));
            let mut col = s.column_mut(c);
            col -= q * proj;
        }
        let n = s.column(c).norm();
        s.column_mut(c).scale_mut(1.0 / n);
    }
    Ok(AdaptedBasis {
        unitary: s,
        w,
        structure,
    })
}

/// Group twirl `(1/|G|) Σ_g W_g x W_g*`, the conditional expectation onto
/// the commutant.
pub fn project_to_commutant(x: &ComplexMatrix, w: &Representation) -> Result<ComplexMatrix> {
    let n = w.dim();
    if x.nrows() != n || x.ncols() != n {
        return Err(dim_mismatch(
            "project_to_commutant",
            format!("{n}x{n}"),
            format!("{}x{}", x.nrows(), x.ncols()),
        ));
    }
    let mut acc = ComplexMatrix::zeros(n, n);
    for g in w.group().elements() {
        let wg = w.matrix(g);
        acc += wg * x * wg.adjoint();
    }
    Ok(acc * c64(w.group().haar_weight(), 0.0))
}

fn check_layout(basis: &AdaptedBasis, bs: &BlockStructure) -> Result<()> {
    if basis.structure != *bs {
        return Err(dim_mismatch(
            "adapted basis layout",
            format!("{:?}", basis.structure.blocks),
            format!("{:?}", bs.blocks),
        ));
    }
    Ok(())
}

/// Channel `B(H1⊗H2) → B(C^{d_c})`: twirl into the commutant, rotate into
/// the adapted basis and send each block `𝟙_{b_k}⊗B_k` to `b_k B_k`.
pub fn compress_map(
    x: &ComplexMatrix,
    basis: &AdaptedBasis,
    bs: &BlockStructure,
) -> Result<ComplexMatrix> {
    check_layout(basis, bs)?;
    let twirled = project_to_commutant(x, &basis.w)?;
    let y = basis.unitary.adjoint() * twirled * &basis.unitary;
    let dc = bs.d_c();
    let mut out = ComplexMatrix::zeros(dc, dc);
    for ((blk, off), coff) in bs.blocks.iter().zip(bs.offsets()).zip(bs.compressed_offsets()) {
        for i in 0..blk.b {
            let start = off + i * blk.n;
            let piece = y.view((start, start), (blk.n, blk.n));
            let mut target = out.view_mut((coff, coff), (blk.n, blk.n));
            target += piece;
        }
    }
    Ok(out)
}

/// Channel `B(C^{d_c}) → B(H1⊗H2)`: pinch to the block diagonal, send
/// `B_k` to `(𝟙_{b_k}/b_k)⊗B_k` and rotate back out of the adapted basis.
pub fn embed_map(
    y: &ComplexMatrix,
    basis: &AdaptedBasis,
    bs: &BlockStructure,
) -> Result<ComplexMatrix> {
    check_layout(basis, bs)?;
    let dc = bs.d_c();
    if y.nrows() != dc || y.ncols() != dc {
        return Err(dim_mismatch(
            "embed_map",
            format!("{dc}x{dc}"),
            format!("{}x{}", y.nrows(), y.ncols()),
        ));
    }
    let n = bs.total();
    let mut z = ComplexMatrix::zeros(n, n);
    for ((blk, off), coff) in bs.blocks.iter().zip(bs.offsets()).zip(bs.compressed_offsets()) {
        let piece = y.view((coff, coff), (blk.n, blk.n)) * c64(1.0 / blk.b as f64, 0.0);
        for i in 0..blk.b {
            let start = off + i * blk.n;
            z.view_mut((start, start), (blk.n, blk.n)).copy_from(&piece);
        }
    }
    Ok(&basis.unitary * z * basis.unitary.adjoint())
}

/// Kraus operators of [`embed_map`]: one `d1d2 × d_c` isometry piece per
/// block and irrep index.
pub fn embed_kraus(basis: &AdaptedBasis, bs: &BlockStructure) -> Result<Vec<ComplexMatrix>> {
    check_layout(basis, bs)?;
    let (n, dc) = (bs.total(), bs.d_c());
    let mut ops = Vec::new();
    for ((blk, off), coff) in bs.blocks.iter().zip(bs.offsets()).zip(bs.compressed_offsets()) {
        let scale = c64(1.0 / (blk.b as f64).sqrt(), 0.0);
        for i in 0..blk.b {
            let mut k = ComplexMatrix::zeros(n, dc);
            for m in 0..blk.n {
                let col = basis.unitary.column(off + i * blk.n + m) * scale;
                k.column_mut(coff + m).copy_from(&col);
            }
            ops.push(k);
        }
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    #[test]
    fn trivial_group_basis_is_identity() {
        let g = catalog_group("z1").unwrap();
        let u = g.irrep_rep("chi0").unwrap();
        let basis = adapted_basis(u, u, &g.irreps, Tolerance::default()).unwrap();
        assert!(max_abs(&(basis.unitary() - identity(1))) < 1e-15);
        assert!(is_abelian(basis.structure()));
    }

    #[test]
    fn pivoted_range_finds_rank() {
        let p = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
            c64(1.0, 0.0),
            c64(0.0, 0.0),
            c64(1.0, 0.0),
        ]));
        assert_eq!(orthonormal_range(&p, 1e-6).len(), 2);
    }

    #[test]
    fn layout_mismatch_is_rejected() {
        let g = catalog_group("a4").unwrap();
        let th = g.irrep_rep("theta").unwrap();
        let basis = adapted_basis(th, th, &g.irreps, Tolerance::default()).unwrap();
        let mut bs = basis.structure().clone();
        bs.blocks.pop();
        assert!(compress_map(&identity(9), &basis, &bs).is_err());
        assert!(embed_map(&identity(5), &basis, basis.structure()).is_ok());
        assert!(embed_map(&identity(4), &basis, basis.structure()).is_err());
    }
}

//! Finite groups, unitary representations and characters.
//!
//! A group is a validated multiplication table. Representations carry one
//! unitary matrix per element and are checked to be homomorphisms. Group
//! averages are uniform sums with weight `1/|G|`.

mod catalog;
mod spec;

pub use catalog::{catalog_names, catalog_group, tetrahedron_basis, tetrahedron_vertices};
pub use spec::{load_group, load_group_json, GroupSpec, IrrepSpec};

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{dim_mismatch, Error, Result};
use crate::matrix::{c64, identity, is_unitary, max_abs, ComplexMatrix, Tolerance};

/// Groups up to this order get a full associativity check.
const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
}

impl GroupTable {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(order: usize, mul: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if mul.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "mul has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(pos) = mul.iter().position(|&x| x >= order) {
            return Err(Error::InvalidGroup(format!(
                "closure fails: mul[{}][{}] = {} is not an element",
                pos / order,
                pos % order,
                mul[pos]
            )));
        }
        let at = |a: usize, b: usize| mul[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for g in 0..order {
            let h = (0..order)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(h);
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if at(at(a, b), c) != at(a, at(b, c)) {
                return Err(Error::InvalidGroup(format!(
                    "associativity fails for ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if order <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                check(
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                )?;
            }
        }
        Ok(Self {
            order,
            mul,
            inverse,
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn haar_weight(&self) -> f64 {
        1.0 / self.order as f64
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inverse(h))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

fn same_group(a: &Arc<GroupTable>, b: &Arc<GroupTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<GroupTable>,
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl Representation {
    /// Checks unitarity of every matrix and the homomorphism law on all pairs.
    pub fn new(
        group: Arc<GroupTable>,
        label: &str,
        matrices: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        let bad = |reason: String| Error::InvalidRepresentation {
            label: label.to_string(),
            reason,
        };
        if matrices.len() != group.order() {
            return Err(bad(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices[0].nrows();
        if dim == 0 {
            return Err(bad("zero dimension".into()));
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(bad(format!("matrix {g} is {}x{}, expected {dim}x{dim}", m.nrows(), m.ncols())));
            }
            if !is_unitary(m, tol) {
                return Err(bad(format!("matrix {g} is not unitary")));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let lhs = &matrices[a] * &matrices[b];
                if max_abs(&(lhs - &matrices[group.mul(a, b)])) > tol {
                    return Err(bad(format!("homomorphism fails for ({a}, {b})")));
                }
            }
        }
        Ok(Self {
            group,
            dim,
            matrices,
        })
    }

    pub(crate) fn from_parts(group: Arc<GroupTable>, matrices: Vec<ComplexMatrix>) -> Self {
        let dim = matrices[0].nrows();
        Self {
            group,
            dim,
            matrices,
        }
    }

    pub fn trivial(group: Arc<GroupTable>) -> Self {
        let matrices = vec![identity(1); group.order()];
        Self::from_parts(group, matrices)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn conjugate(&self) -> Self {
        Self::from_parts(
            self.group.clone(),
            self.matrices.iter().map(|m| m.conjugate()).collect(),
        )
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.ensure_same_group(other)?;
        Ok(Self::from_parts(
            self.group.clone(),
            self.matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.kronecker(b))
                .collect(),
        ))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.ensure_same_group(other)?;
        let (m, n) = (self.dim, other.dim);
        Ok(Self::from_parts(
            self.group.clone(),
            self.matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| {
                    let mut s = ComplexMatrix::zeros(m + n, m + n);
                    s.view_mut((0, 0), (m, m)).copy_from(a);
                    s.view_mut((m, m), (n, n)).copy_from(b);
                    s
                })
                .collect(),
        ))
    }

    /// Largest deviation from unitarity over all elements.
    pub fn unitarity_residual(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| max_abs(&(m * m.adjoint() - identity(self.dim))))
            .fold(0.0, f64::max)
    }

    fn ensure_same_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

/// `g ↦ conj(U_g) ⊗ V_g`.
pub fn bar_tensor_rep(u: &Representation, v: &Representation) -> Result<Representation> {
    u.conjugate().tensor(v)
}

#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<GroupTable>,
    values: Vec<Complex64>,
}

impl Character {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, g: usize) -> Complex64 {
        self.values[g]
    }

    /// Largest `|χ(g) − χ(h g h⁻¹)|` over all pairs.
    pub fn class_function_residual(&self) -> f64 {
        let grp = &self.group;
        let mut worst: f64 = 0.0;
        for g in grp.elements() {
            for h in grp.elements() {
                worst = worst.max((self.values[g] - self.values[grp.conjugate(g, h)]).norm());
            }
        }
        worst
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(Self {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }
}

pub fn character_of(rep: &Representation) -> Character {
    Character {
        group: rep.group.clone(),
        values: rep.matrices.iter().map(|m| m.trace()).collect(),
    }
}

/// `(1/|G|) Σ_g conj(a(g)) b(g)`, summed in element order.
pub fn char_inner(a: &Character, b: &Character) -> Result<Complex64> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let sum: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.group.haar_weight())
}

pub fn is_irreducible(rep: &Representation, tol: f64) -> bool {
    let chi = character_of(rep);
    let norm = char_inner(&chi, &chi).expect("same group");
    (norm - c64(1.0, 0.0)).norm() <= tol
}

#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub rep: Representation,
}

/// A complete list of inequivalent irreps with explicit matrices.
#[derive(Debug, Clone)]
pub struct IrrepTable {
    group: Arc<GroupTable>,
    irreps: Vec<Irrep>,
}

impl IrrepTable {
    /// Checks `Σ d_α² = |G|`, unique labels and orthonormal characters.
    pub fn new(group: Arc<GroupTable>, irreps: Vec<Irrep>, tol: f64) -> Result<Self> {
        let sum_sq: usize = irreps.iter().map(|i| i.rep.dim() * i.rep.dim()).sum();
        if sum_sq != group.order() {
            return Err(Error::InvalidGroup(format!(
                "sum of squared irrep dimensions is {sum_sq}, group order is {}",
                group.order()
            )));
        }
        for (i, a) in irreps.iter().enumerate() {
            if !same_group(&a.rep.group, &group) {
                return Err(Error::GroupMismatch);
            }
            if irreps[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::InvalidGroup(format!("duplicate irrep label `{}`", a.label)));
            }
        }
        let chars: Vec<Character> = irreps.iter().map(|i| character_of(&i.rep)).collect();
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let ip = char_inner(a, b)?;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - c64(expect, 0.0)).norm() > tol.max(1e-9) {
                    return Err(Error::InvalidRepresentation {
                        label: irreps[i].label.clone(),
                        reason: format!(
                            "character inner product with `{}` is {ip:.6}, expected {expect}",
                            irreps[j].label
                        ),
                    });
                }
            }
        }
        Ok(Self { group, irreps })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Irrep> {
        self.irreps.iter()
    }

    pub fn get(&self, label: &str) -> Result<&Irrep> {
        self.irreps
            .iter()
            .find(|i| i.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|i| i.label == label)
    }

    pub fn irrep(&self, index: usize) -> &Irrep {
        &self.irreps[index]
    }

    pub fn labels(&self) -> Vec<&str> {
        self.irreps.iter().map(|i| i.label.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityVector {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub counts: Vec<usize>,
    /// Largest distance of a raw inner product from its rounded value.
    pub max_residual: f64,
}

impl MultiplicityVector {
    pub fn get(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label).map(|i| self.counts[i])
    }

    pub fn total_dim(&self) -> usize {
        self.counts.iter().zip(&self.dims).map(|(n, d)| n * d).sum()
    }
}

/// `n_α = <χ_α, χ_W>`, rejected if any value is not within `tol.round` of
/// a nonnegative integer.
pub fn multiplicities(
    w: &Representation,
    irreps: &IrrepTable,
    tol: Tolerance,
) -> Result<MultiplicityVector> {
    if !same_group(&w.group, &irreps.group) {
        return Err(Error::GroupMismatch);
    }
    let chi_w = character_of(w);
    let mut out = MultiplicityVector {
        labels: Vec::with_capacity(irreps.len()),
        dims: Vec::with_capacity(irreps.len()),
        counts: Vec::with_capacity(irreps.len()),
        max_residual: 0.0,
    };
    for irrep in irreps.iter() {
        let raw = char_inner(&character_of(&irrep.rep), &chi_w)?;
        let rounded = raw.re.round();
        let residual = (raw - c64(rounded, 0.0)).norm();
        if residual > tol.round || rounded < 0.0 {
            return Err(Error::NonIntegerMultiplicity {
                label: irrep.label.clone(),
                value: raw.re,
            });
        }
        out.labels.push(irrep.label.clone());
        out.dims.push(irrep.rep.dim());
        out.counts.push(rounded as usize);
        out.max_residual = out.max_residual.max(residual);
    }
    if out.total_dim() != w.dim() {
        return Err(Error::InvalidRepresentation {
            label: "W".into(),
            reason: format!(
                "multiplicities account for dimension {}, representation has {}",
                out.total_dim(),
                w.dim()
            ),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OneDimReport {
    pub holds: bool,
    /// Multiplicity in `Ū⊗V` of every one-dimensional irrep.
    pub one_dim: Vec<(String, usize)>,
}

/// Every one-dimensional irrep appears at most once in `Ū⊗V` when `U` is
/// irreducible and `dim V ≤ dim U`.
pub fn one_dim_multiplicity_check(
    u: &Representation,
    v: &Representation,
    irreps: &IrrepTable,
    tol: Tolerance,
) -> Result<OneDimReport> {
    let chi = character_of(u);
    let norm = char_inner(&chi, &chi)?;
    if (norm - c64(1.0, 0.0)).norm() > tol.round {
        return Err(Error::NotIrreducible { norm: norm.re });
    }
    if v.dim() > u.dim() {
        return Err(dim_mismatch("one_dim_multiplicity_check", format!("dim v <= {}", u.dim()), v.dim()));
    }
    let w = bar_tensor_rep(u, v)?;
    let mult = multiplicities(&w, irreps, tol)?;
    let one_dim: Vec<(String, usize)> = mult
        .labels
        .iter()
        .zip(&mult.dims)
        .zip(&mult.counts)
        .filter(|((_, &d), _)| d == 1)
        .map(|((l, _), &n)| (l.clone(), n))
        .collect();
    Ok(OneDimReport {
        holds: one_dim.iter().all(|(_, n)| *n <= 1),
        one_dim,
    })
}

/// A validated group together with its irreps.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    pub table: Arc<GroupTable>,
    pub irreps: IrrepTable,
}

impl FiniteGroup {
    pub fn irrep_rep(&self, label: &str) -> Result<&Representation> {
        Ok(&self.irreps.get(label)?.rep)
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }
}

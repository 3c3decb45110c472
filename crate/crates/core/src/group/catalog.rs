//! Built-in groups, generated by closing a faithful matrix representation
//! under multiplication. Irreps are given by their images of the generators
//! and evaluated along the word that reached each element.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{FiniteGroup, GroupTable, Irrep, IrrepTable, Representation};
use crate::error::{Error, Result};
use crate::matrix::{c64, from_real, identity, ComplexMatrix};

const KEY_SCALE: f64 = 1e7;

type Key = Vec<(i64, i64)>;

fn key(m: &ComplexMatrix) -> Key {
    m.iter()
        .map(|z| ((z.re * KEY_SCALE).round() as i64, (z.im * KEY_SCALE).round() as i64))
        .collect()
}

struct Generated {
    table: Arc<GroupTable>,
    words: Vec<Vec<usize>>,
}

fn generate(gens: &[ComplexMatrix]) -> Generated {
    let dim = gens[0].nrows();
    let mut elements = vec![identity(dim)];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Key, usize> = HashMap::new();
    index.insert(key(&elements[0]), 0);
    let mut head = 0;
    while head < elements.len() {
        for (k, g) in gens.iter().enumerate() {
            let next = &elements[head] * g;
            let kk = key(&next);
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(kk) {
                slot.insert(elements.len());
                let mut w = words[head].clone();
                w.push(k);
                words.push(w);
                elements.push(next);
            }
        }
        head += 1;
    }
    let n = elements.len();
    let mut mul = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            mul.push(index[&key(&(a * b))]);
        }
    }
    let table = GroupTable::new(n, mul).expect("closure of a matrix group is a group");
    Generated {
        table: Arc::new(table),
        words,
    }
}

fn evaluate(words: &[Vec<usize>], images: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let dim = images[0].nrows();
    words
        .iter()
        .map(|w| w.iter().fold(identity(dim), |acc, &k| acc * &images[k]))
        .collect()
}

struct Builder {
    name: String,
    gen: Generated,
    irreps: Vec<Irrep>,
}

impl Builder {
    fn new(name: impl Into<String>, gens: &[ComplexMatrix]) -> Self {
        Self {
            name: name.into(),
            gen: generate(gens),
            irreps: Vec::new(),
        }
    }

    fn irrep(mut self, label: impl Into<String>, images: &[ComplexMatrix]) -> Self {
        let matrices = evaluate(&self.gen.words, images);
        self.irreps.push(Irrep {
            label: label.into(),
            rep: Representation::from_parts(self.gen.table.clone(), matrices),
        });
        self
    }

    fn scalar_irrep(self, label: impl Into<String>, values: &[Complex64]) -> Self {
        let images: Vec<ComplexMatrix> =
            values.iter().map(|&z| ComplexMatrix::from_element(1, 1, z)).collect();
        self.irrep(label, &images)
    }

    /// Re-validates every irrep so catalog groups pass the same checks as
    /// user-supplied ones.
    fn finish(self) -> Result<FiniteGroup> {
        let tol = 1e-9;
        let mut checked = Vec::with_capacity(self.irreps.len());
        for irrep in self.irreps {
            let rep = Representation::new(
                self.gen.table.clone(),
                &irrep.label,
                irrep.rep.matrices,
                tol,
            )?;
            checked.push(Irrep {
                label: irrep.label,
                rep,
            });
        }
        let irreps = IrrepTable::new(self.gen.table.clone(), checked, tol)?;
        Ok(FiniteGroup {
            name: self.name,
            table: self.gen.table,
            irreps,
        })
    }
}

fn root_of_unity(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64)
}

fn sign(bit: usize) -> Complex64 {
    if bit == 0 {
        c64(1.0, 0.0)
    } else {
        c64(-1.0, 0.0)
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    let gen = ComplexMatrix::from_element(1, 1, root_of_unity(n, 1));
    let mut b = Builder::new(format!("z{n}"), &[gen]);
    for j in 0..n {
        b = b.scalar_irrep(format!("chi{j}"), &[root_of_unity(n, j)]);
    }
    b.finish()
}

fn klein() -> Result<FiniteGroup> {
    let a = from_real(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
    let bgen = from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let mut b = Builder::new("klein", &[a, bgen]);
    for x in 0..2 {
        for y in 0..2 {
            b = b.scalar_irrep(format!("chi{x}{y}"), &[sign(x), sign(y)]);
        }
    }
    b.finish()
}

fn s3() -> Result<FiniteGroup> {
    let (s, c) = (2.0 * PI / 3.0).sin_cos();
    let r = from_real(2, 2, &[c, -s, s, c]);
    let f = from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    Builder::new("s3", &[r.clone(), f.clone()])
        .scalar_irrep("triv", &[c64(1.0, 0.0), c64(1.0, 0.0)])
        .scalar_irrep("sign", &[c64(1.0, 0.0), c64(-1.0, 0.0)])
        .irrep("std", &[r, f])
        .finish()
}

fn q8() -> Result<FiniteGroup> {
    let qi = ComplexMatrix::from_row_slice(2, 2, &[c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)]);
    let qj = from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    Builder::new("q8", &[qi.clone(), qj.clone()])
        .scalar_irrep("triv", &[sign(0), sign(0)])
        .scalar_irrep("chi_i", &[sign(0), sign(1)])
        .scalar_irrep("chi_j", &[sign(1), sign(0)])
        .scalar_irrep("chi_k", &[sign(1), sign(1)])
        .irrep("h", &[qi, qj])
        .finish()
}

/// Permutation matrix with `P e_i = e_{p(i)}`.
fn permutation_matrix(p: &[usize]) -> ComplexMatrix {
    let n = p.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &pi) in p.iter().enumerate() {
        m[(pi, i)] = c64(1.0, 0.0);
    }
    m
}

/// Tetrahedron vertices `v_i = 4 e_i − (1,1,1,1)` in `C^4`.
pub fn tetrahedron_vertices() -> [ComplexMatrix; 4] {
    std::array::from_fn(|i| {
        ComplexMatrix::from_fn(4, 1, |r, _| c64(if r == i { 3.0 } else { -1.0 }, 0.0))
    })
}

/// Orthonormal basis (4×3, columns) of `(1,1,1,1)^⊥`, obtained by
/// Gram–Schmidt on `v_1, v_2, v_3`.
pub fn tetrahedron_basis() -> ComplexMatrix {
    let verts = tetrahedron_vertices();
    let mut cols: Vec<ComplexMatrix> = Vec::with_capacity(3);
    for v in verts.iter().take(3) {
        let mut w = v.clone();
        for q in &cols {
            let proj = (q.adjoint() * &w)[(0, 0)];
            w -= q * proj;
        }
        let n = w.norm();
        cols.push(w / c64(n, 0.0));
    }
    ComplexMatrix::from_fn(4, 3, |r, c| cols[c][(r, 0)])
}

fn a4() -> Result<FiniteGroup> {
    // (123) and (12)(34) on 0-based points
    let c3 = permutation_matrix(&[1, 2, 0, 3]);
    let v4 = permutation_matrix(&[1, 0, 3, 2]);
    let basis = tetrahedron_basis();
    let theta = |p: &ComplexMatrix| basis.adjoint() * p * &basis;
    let mut b = Builder::new("a4", &[c3.clone(), v4.clone()]);
    for j in 0..3 {
        b = b.scalar_irrep(format!("phi{j}"), &[root_of_unity(3, j), c64(1.0, 0.0)]);
    }
    b.irrep("theta", &[theta(&c3), theta(&v4)]).finish()
}

fn shift_clock(d: usize) -> (ComplexMatrix, ComplexMatrix) {
    let mut x = ComplexMatrix::zeros(d, d);
    let mut z = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        x[((j + 1) % d, j)] = c64(1.0, 0.0);
        z[(j, j)] = root_of_unity(d, j);
    }
    (x, z)
}

/// Single-qubit Pauli group `<X, Z, iI>` of order 16.
fn pauli2() -> Result<FiniteGroup> {
    let (x, z) = shift_clock(2);
    let i = identity(2) * c64(0.0, 1.0);
    let mut b = Builder::new("pauli2", &[x.clone(), z.clone(), i.clone()]);
    for sx in 0..2 {
        for sz in 0..2 {
            for sc in 0..2 {
                b = b.scalar_irrep(format!("chi{sx}{sz}{sc}"), &[sign(sx), sign(sz), sign(sc)]);
            }
        }
    }
    b.irrep("w", &[x.clone(), z.clone(), i.clone()])
        .irrep("wbar", &[x, z, i.conjugate()])
        .finish()
}

/// Qutrit Weyl–Heisenberg group `<X, Z>` of order 27.
fn pauli3() -> Result<FiniteGroup> {
    let (x, z) = shift_clock(3);
    let mut b = Builder::new("pauli3", &[x.clone(), z.clone()]);
    for a in 0..3 {
        for c in 0..3 {
            b = b.scalar_irrep(format!("chi{a}{c}"), &[root_of_unity(3, a), root_of_unity(3, c)]);
        }
    }
    b.irrep("w", &[x.clone(), z.clone()])
        .irrep("wbar", &[x.conjugate(), z.conjugate()])
        .finish()
}

pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=12).map(|n| format!("z{n}")).collect();
    names.extend(["klein", "s3", "a4", "q8", "pauli2", "pauli3"].map(String::from));
    names
}

pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "klein" => klein(),
        "s3" => s3(),
        "a4" => a4(),
        "q8" => q8(),
        "pauli2" => pauli2(),
        "pauli3" => pauli3(),
        _ => match name.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (1..=12).contains(&n) => cyclic(n),
            _ => Err(Error::UnknownGroup(name.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expect = [("klein", 4), ("s3", 6), ("a4", 12), ("q8", 8), ("pauli2", 16), ("pauli3", 27)];
        for (name, order) in expect {
            assert_eq!(catalog_group(name).unwrap().order(), order, "{name}");
        }
        for n in 1..=12 {
            assert_eq!(catalog_group(&format!("z{n}")).unwrap().order(), n);
        }
        assert!(catalog_group("z13").is_err());
        assert!(catalog_group("so3").is_err());
    }

    #[test]
    fn tetrahedron_basis_is_orthonormal_and_spans_vertices() {
        let b = tetrahedron_basis();
        assert!((b.adjoint() * &b - identity(3)).norm() < 1e-14);
        for v in tetrahedron_vertices() {
            let back = &b * (b.adjoint() * &v);
            assert!((back - v).norm() < 1e-13);
        }
    }
}

//! Operators behind the `θθ`-covariant channels of the alternating group
//! `A4`: the unitary `V` with `θ_g V θ_g* = φ¹_g V`, the projection `P` onto
//! the two-dimensional multiplicity algebra, and a Pauli representation of
//! that algebra. Everything is expressed in [`tetrahedron_basis`]
//! coordinates, matching the catalog's `theta` irrep.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::group::{tetrahedron_basis, tetrahedron_vertices};
use crate::matrix::{c64, flip, identity, maximally_entangled_vector, ComplexMatrix};

fn zeta() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// `(V v_i)` for the four vertices, as vectors in `C^4`.
fn vertex_images() -> [ComplexMatrix; 4] {
    let v = tetrahedron_vertices();
    let (z, z2) = (zeta(), zeta() * zeta());
    let one = c64(1.0, 0.0);
    let coeffs = [
        [c64(0.0, 0.0), one, z, z2],
        [one, c64(0.0, 0.0), z2, z],
        [z, z2, c64(0.0, 0.0), one],
        [z2, z, one, c64(0.0, 0.0)],
    ];
    coeffs.map(|row| {
        row.iter()
            .zip(&v)
            .fold(ComplexMatrix::zeros(4, 1), |acc, (&c, vi)| acc + vi * c)
            * c64(0.5, 0.0)
    })
}

/// The intertwiner `V`, fixed by its action on `v_1, v_2, v_3`.
pub fn intertwiner() -> ComplexMatrix {
    let b = tetrahedron_basis();
    let v = tetrahedron_vertices();
    let images = vertex_images();
    let coords = ComplexMatrix::from_fn(3, 3, |r, c| (b.adjoint() * &v[c])[(r, 0)]);
    let targets = ComplexMatrix::from_fn(3, 3, |r, c| (b.adjoint() * &images[c])[(r, 0)]);
    let inv = coords
        .try_inverse()
        .expect("three tetrahedron vertices are linearly independent");
    targets * inv
}

/// How far the redundant relation for `v_4` is from holding.
pub fn intertwiner_consistency() -> f64 {
    let b = tetrahedron_basis();
    let v4 = b.adjoint() * &tetrahedron_vertices()[3];
    let image = b.adjoint() * &vertex_images()[3];
    (intertwiner() * v4 - image).norm()
}

/// Choi state of `T_j(ρ) = V^j ρ V^{*j}`.
pub fn unitary_choi(j: usize) -> ComplexMatrix {
    let vj = power(&intertwiner(), j);
    let psi = identity(3).kronecker(&vj) * maximally_entangled_vector(3);
    &psi * psi.adjoint()
}

fn power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    (0..k).fold(identity(m.nrows()), |acc, _| acc * m)
}

/// `P = 𝟙_9 − Σ_j (𝟙⊗V^j)|Ω><Ω|(𝟙⊗V^j)*`.
pub fn projector() -> ComplexMatrix {
    (0..3).fold(identity(9), |acc, j| acc - unitary_choi(j))
}

/// `V ⊗ V*` with `V*` the adjoint.
pub fn v_tensor_vdag() -> ComplexMatrix {
    let v = intertwiner();
    v.kronecker(&v.adjoint())
}

/// `[V_X, V_Y, V_Z]`, satisfying `V_i V_j + V_j V_i = 2δ_ij P`.
pub fn pauli_operators() -> [ComplexMatrix; 3] {
    let p = projector();
    let pf = &p * flip(3);
    let m = v_tensor_vdag() * c64(2.0, 0.0) + identity(9);
    let s3 = 3f64.sqrt();
    let vy = &pf * &m * c64(1.0 / s3, 0.0);
    let vz = &p * &m * c64(0.0, -1.0 / s3);
    [pf, vy, vz]
}

/// `J_λ = (P + λ_x V_X + λ_y V_Y + λ_z V_Z)/6`.
pub fn bloch_choi(lambda: [f64; 3]) -> ComplexMatrix {
    let ops = pauli_operators();
    let mut j = projector();
    for (l, op) in lambda.iter().zip(&ops) {
        j += op * c64(*l, 0.0);
    }
    j * c64(1.0 / 6.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{is_unitary, max_abs};

    #[test]
    fn v_is_unitary_of_order_three_up_to_phase() {
        let v = intertwiner();
        assert!(is_unitary(&v, 1e-12));
        assert!(intertwiner_consistency() < 1e-12);
        let v3 = power(&v, 3);
        let phase = v3[(0, 0)];
        assert!(max_abs(&(v3 - identity(3) * phase)) < 1e-12);
    }

    #[test]
    fn projector_has_rank_six() {
        let p = projector();
        assert!(max_abs(&(&p * &p - &p)) < 1e-12);
        assert!((p.trace().re - 6.0).abs() < 1e-12);
    }
}

//! Small fixed-size linear algebra shared by the rest of the crate.
//!
//! Basis convention for the 4×4 matrices: |00⟩, |01⟩, |10⟩, |11⟩ with the
//! first index belonging to qubit 1 and |0⟩ the +1 eigenstate of σ_z.

use nalgebra::{Matrix2, Matrix3, Matrix4, Rotation3, Vector3, Vector4};
pub use num_complex::Complex64;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type CMat2 = Matrix2<Complex64>;
pub type CMat4 = Matrix4<Complex64>;
pub type CVec4 = Vector4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// σ_x, σ_y, σ_z in the standard representation.
pub fn pauli(axis: usize) -> CMat2 {
    match axis {
        0 => CMat2::new(ZERO, ONE, ONE, ZERO),
        1 => CMat2::new(ZERO, -I, I, ZERO),
        2 => CMat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli axis {axis} out of range"),
    }
}

pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    CMat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// σ_α ⊗ 1
pub fn sigma_first(axis: usize) -> CMat4 {
    kron(&pauli(axis), &CMat2::identity())
}

/// 1 ⊗ τ_β
pub fn tau_second(axis: usize) -> CMat4 {
    kron(&CMat2::identity(), &pauli(axis))
}

/// σ_α ⊗ τ_β
pub fn sigma_tau(alpha: usize, beta: usize) -> CMat4 {
    kron(&pauli(alpha), &pauli(beta))
}

/// Re tr(A·B) without forming the product.
pub fn trace_product_re(a: &CMat4, b: &CMat4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Largest |M − M†| entry.
pub fn hermiticity_residual(m: &CMat4) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..4 {
        for c in r..4 {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat4) -> [f64; 4] {
    let vals = m.symmetric_eigenvalues();
    let mut out = [vals[0], vals[1], vals[2], vals[3]];
    out.sort_by(f64::total_cmp);
    out
}

pub fn min_eigenvalue(m: &CMat4) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigenpairs of a Hermitian 4×4 matrix, descending by eigenvalue.
pub fn hermitian_eigen_desc(m: &CMat4) -> ([f64; 4], [CVec4; 4]) {
    let eig = m.symmetric_eigen();
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = idx.map(|i| eig.eigenvalues[i]);
    let vecs = idx.map(|i| eig.eigenvectors.column(i).into_owned());
    (vals, vecs)
}

/// Transpose on the first qubit: entry ((a b),(a′ b′)) ← ((a′ b),(a b′)).
pub fn partial_transpose_first(m: &CMat4) -> CMat4 {
    CMat4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (c / 2, c % 2);
        m[(2 * a2 + b, 2 * a + b2)]
    })
}

/// Attempts a Cholesky factorisation of `m + shift·1`; success means the
/// shifted matrix is positive definite.
pub fn is_positive_definite_shifted(m: &CMat4, shift: f64) -> bool {
    let mut a = *m;
    for i in 0..4 {
        a[(i, i)] += shift;
    }
    let mut l = CMat4::zeros();
    for j in 0..4 {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in (j + 1)..4 {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    true
}

pub fn outer(psi: &CVec4) -> CMat4 {
    psi * psi.adjoint()
}

/// Residual of `O` from being a proper rotation: max of |OᵀO − 1| entries
/// and |det O − 1|.
pub fn rotation_residual(o: &Mat3) -> f64 {
    let orth = (o.transpose() * o - Mat3::identity()).amax();
    orth.max((o.determinant() - 1.0).abs())
}

/// Rotation matrix from an axis-angle vector (direction = axis, norm = angle).
pub fn rotation_from_vector(v: &Vec3) -> Mat3 {
    Rotation3::new(*v).into_inner()
}

/// 2×2 unitary that rotates Pauli vectors by the proper rotation `o`:
/// U σ_β U† = Σ_α o_αβ σ_α.
pub fn spin_half_unitary(o: &Mat3) -> CMat2 {
    let rot = Rotation3::from_matrix_unchecked(*o);
    let (axis, angle) = match rot.axis_angle() {
        Some((axis, angle)) => (axis.into_inner(), angle),
        None => return CMat2::identity(),
    };
    let (s, c) = (angle / 2.0).sin_cos();
    let mut u = CMat2::identity() * Complex64::new(c, 0.0);
    for k in 0..3 {
        u -= pauli(k) * Complex64::new(0.0, s * axis[k]);
    }
    u
}

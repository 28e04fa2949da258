//! Roots of monic quartics `x⁴ + a₃x³ + a₂x² + a₁x + a₀`.
//!
//! Roots start from the eigenvalues of the companion matrix. Each root is
//! then Newton-polished. Clusters of nearby roots are treated as one
//! multiple root. A computed multiple root scatters by ε^(1/m) around its
//! true value, while the cluster centre refined on the (m−1)-th derivative
//! stays accurate to O(ε).

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;

/// Roots closer than this (relative to the root scale) are one cluster.
const CLUSTER_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy)]
struct Poly {
    // c[k] multiplies x^k, degree ≤ 4
    c: [f64; 5],
}

impl Poly {
    fn derivative(&self) -> Poly {
        let mut d = [0.0; 5];
        for k in 1..5 {
            d[k - 1] = self.c[k] * k as f64;
        }
        Poly { c: d }
    }

    fn eval(&self, x: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
    }

    fn eval_re(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    /// Σ |c_k| |x|^k, the scale of rounding error in `eval`.
    fn magnitude(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * x.abs() + a.abs())
    }
}

fn companion_roots(a: [f64; 4]) -> [Complex64; 4] {
    companion_schur_roots(a).unwrap_or_else(|| aberth_roots(a))
}

fn companion_schur_roots(a: [f64; 4]) -> Option<[Complex64; 4]> {
    let [a3, a2, a1, a0] = a;
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 0.0, 0.0, -a0,
        1.0, 0.0, 0.0, -a1,
        0.0, 1.0, 0.0, -a2,
        0.0, 0.0, 1.0, -a3,
    );
    // The unbounded QR iteration can cycle on symmetric root patterns.
    let ev = Schur::try_new(m, f64::EPSILON, 200)?.complex_eigenvalues();
    Some([ev[0], ev[1], ev[2], ev[3]])
}

/// Simultaneous Aberth–Ehrlich iteration, used when the Schur form fails.
fn aberth_roots(a: [f64; 4]) -> [Complex64; 4] {
    let p = Poly {
        c: [a[3], a[2], a[1], a[0], 1.0],
    };
    let dp = p.derivative();
    // Cauchy bound on the root moduli
    let radius = 1.0 + a.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut z: [Complex64; 4] =
        std::array::from_fn(|k| Complex64::from_polar(radius, 0.4 + k as f64 * std::f64::consts::FRAC_PI_2));
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for k in 0..4 {
            let ratio = p.eval(z[k]) / dp.eval(z[k]);
            let repel: Complex64 = (0..4).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved <= 1e-16 * radius {
            break;
        }
    }
    z
}

fn newton_complex(p: &Poly, x0: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut x = x0;
    let mut best = (p.eval(x).norm(), x);
    for _ in 0..16 {
        let d = dp.eval(x);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(x) / d;
        x -= step;
        let r = p.eval(x).norm();
        if r < best.0 {
            best = (r, x);
        }
        if step.norm() <= 1e-17 * x.norm().max(1.0) {
            break;
        }
    }
    best.1
}

fn newton_real(p: &Poly, x0: f64) -> f64 {
    let dp = p.derivative();
    let mut x = x0;
    let mut best = (p.eval_re(x).abs(), x);
    for _ in 0..16 {
        let d = dp.eval_re(x);
        if d == 0.0 {
            break;
        }
        let step = p.eval_re(x) / d;
        x -= step;
        let r = p.eval_re(x).abs();
        if r < best.0 {
            best = (r, x);
        }
        if step.abs() <= 1e-17 * x.abs().max(1.0) {
            break;
        }
    }
    best.1
}

/// Splits `roots` into clusters by single linkage.
fn clusters(roots: &[Complex64; 4], tol: f64) -> Vec<Vec<usize>> {
    let mut label = [0usize, 1, 2, 3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (roots[i] - roots[j]).norm() < tol {
                let (from, to) = (label[j].max(label[i]), label[j].min(label[i]));
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for l in 0..4 {
        let members: Vec<usize> = (0..4).filter(|&i| label[i] == l).collect();
        if !members.is_empty() {
            out.push(members);
        }
    }
    out
}

/// The two roots of a near-double root around `center`, from the local
/// quadratic Taylor model; coincident when the discriminant is at noise level.
fn resolve_pair(p: &Poly, center: f64) -> [f64; 2] {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let (f0, f1, f2) = (p.eval_re(center), d1.eval_re(center), d2.eval_re(center));
    if f2 == 0.0 {
        return [center; 2];
    }
    let disc = f1 * f1 - 2.0 * f0 * f2;
    let noise = 64.0 * f64::EPSILON * (f1 * f1 + 2.0 * p.magnitude(center) * f2.abs());
    let vertex = center - f1 / f2;
    if disc <= noise {
        [vertex; 2]
    } else {
        let h = disc.sqrt() / f2.abs();
        [newton_real(p, vertex + h), newton_real(p, vertex - h)]
    }
}

/// All four roots, sorted by real part, descending.
pub fn solve_monic_quartic(a: [f64; 4]) -> [Complex64; 4] {
    let p = Poly {
        c: [a[3], a[2], a[1], a[0], 1.0],
    };
    let raw = companion_roots(a);
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut out = Vec::with_capacity(4);
    for members in clusters(&raw, CLUSTER_TOL * scale) {
        let m = members.len();
        let mean = members.iter().map(|&i| raw[i]).sum::<Complex64>() / m as f64;
        match m {
            1 => out.push(newton_complex(&p, mean)),
            2 if mean.im.abs() < CLUSTER_TOL * scale => {
                for r in resolve_pair(&p, mean.re) {
                    out.push(Complex64::new(r, 0.0));
                }
            }
            _ if mean.im.abs() < CLUSTER_TOL * scale => {
                let mut q = p;
                for _ in 0..(m - 1) {
                    q = q.derivative();
                }
                let r = newton_real(&q, mean.re);
                out.extend(std::iter::repeat(Complex64::new(r, 0.0)).take(m));
            }
            // A cluster of genuinely complex roots: no refinement.
            _ => out.extend(members.iter().map(|&i| raw[i])),
        }
    }
    out.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    [out[0], out[1], out[2], out[3]]
}

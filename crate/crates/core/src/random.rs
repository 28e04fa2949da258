//! Seeded sampling of states and local rotations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMat4, Mat3, Vec3};
use crate::state::{DensityMatrix, TwoQubitState};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// G·G†/tr(G·G†) for a 4×k matrix G of standard complex normal entries.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Result<DensityMatrix> {
    if !(1..=4).contains(&rank) {
        return Err(Error::argument(format!("target rank {rank} outside 1..=4")));
    }
    let mut m = CMat4::zeros();
    for _ in 0..rank {
        let col = nalgebra::Vector4::from_fn(|_, _| complex_normal(rng));
        m += col * col.adjoint();
    }
    let tr = m.trace().re;
    m /= Complex64::new(tr, 0.0);
    // Enforce exact Hermiticity against rounding in the accumulation.
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(m)
}

/// Deterministic random state for a given seed; full rank unless
/// `target_rank` is given.
pub fn random_state(seed: u64, target_rank: Option<usize>) -> Result<TwoQubitState> {
    let mut rng = rng_from_seed(seed);
    random_state_with(&mut rng, target_rank)
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, target_rank: Option<usize>) -> Result<TwoQubitState> {
    let rho = random_density_matrix(rng, target_rank.unwrap_or(4))?;
    Ok(TwoQubitState::from_density_matrix(&rho))
}

/// Haar-distributed proper rotation (via a normalised random quaternion).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let q = nalgebra::Quaternion::new(
        rng.sample::<f64, _>(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    );
    nalgebra::UnitQuaternion::from_quaternion(q)
        .to_rotation_matrix()
        .into_inner()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let v = Vec3::from_fn(|_, _| rng.sample(StandardNormal));
    v.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rotation_residual;

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(random_state(42, None).unwrap(), random_state(42, None).unwrap());
        assert_ne!(random_state(42, None).unwrap(), random_state(43, None).unwrap());
    }

    #[test]
    fn rank_one_is_pure() {
        for seed in 0..20 {
            let rho = random_state(seed, Some(1)).unwrap().to_density_matrix();
            assert!((rho.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_are_positive() {
        for seed in 0..50 {
            for rank in 1..=4 {
                let rho = random_state(seed, Some(rank)).unwrap().to_density_matrix();
                assert!(rho.min_eigenvalue() > -1e-14);
            }
        }
    }

    #[test]
    fn bad_rank_rejected() {
        assert!(random_state(0, Some(0)).is_err());
        assert!(random_state(0, Some(5)).is_err());
    }

    #[test]
    fn rotations_are_proper() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            assert!(rotation_residual(&random_rotation(&mut rng)) < 1e-14);
        }
    }
}

//! Binary quadratic programs as identical-interest potential games.
//!
//! The program `max q.x + (1/2) x^T Q x` over `x in {0,1}^n` embeds as an
//! `n`-player, two-action, identical-interest game whose shared payoff is
//! the objective. Pure Nash equilibria are exactly the program's local
//! optima (points whose objective weakly dominates all single-bit flips),
//! and the pull map is the identity.

use crate::error::{Error, Result};
use crate::games::{ExplicitGame, Profile};
use crate::scalar::Rational;
use crate::Scalar;

/// `max q.x + (1/2) x^T Q x`, integral data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BqpInstance {
    pub q: Vec<i64>,
    /// Row-major `n x n` matrix.
    pub matrix: Vec<Vec<i64>>,
}

impl BqpInstance {
    pub fn new(matrix: Vec<Vec<i64>>, q: Vec<i64>) -> Result<Self> {
        let n = q.len();
        if n == 0 || matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "need a square matrix matching the {n}-entry linear term"
            )));
        }
        Ok(BqpInstance { q, matrix })
    }

    pub fn dimension(&self) -> usize {
        self.q.len()
    }

    /// The objective at a 0-1 point, as an exact rational (the quadratic
    /// term carries a factor 1/2).
    pub fn objective(&self, x: &[usize]) -> Rational {
        let n = self.dimension();
        debug_assert_eq!(x.len(), n);
        let mut linear = 0i64;
        let mut quad = 0i64;
        for j in 0..n {
            if x[j] == 0 {
                continue;
            }
            linear += self.q[j];
            for (k, &xk) in x.iter().enumerate() {
                if xk == 1 {
                    quad += self.matrix[j][k];
                }
            }
        }
        Rational::from_int(linear) + Rational::new(quad, 2)
    }

    /// Whether `x` is a local optimum: no single coordinate flip strictly
    /// increases the objective.
    pub fn is_local_optimum(&self, x: &[usize]) -> bool {
        let here = self.objective(x);
        let mut flipped = x.to_vec();
        (0..self.dimension()).all(|j| {
            flipped[j] = 1 - x[j];
            let v = self.objective(&flipped);
            flipped[j] = x[j];
            v <= here
        })
    }

    /// The `reduced-from` provenance line for emitted game files.
    pub fn provenance(&self, source_path: &str) -> String {
        format!("reduced-from bqp source={source_path} m=2")
    }
}

/// Embeds the instance as an identical-interest game; the pull map is the
/// identity on 0-1 profiles.
pub fn reduce_bqp_to_game<R: Scalar>(inst: &BqpInstance) -> Result<ExplicitGame<R>> {
    let n = inst.dimension();
    ExplicitGame::identical_interest(vec![2; n], |p: &Profile| {
        let v = inst.objective(&p.0);
        R::from_ratio(*v.numer(), *v.denom())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::potential::verify_potential;
    use crate::games::{is_pne, profile_count};
    use rand::{Rng, SeedableRng};

    #[test]
    fn monotone_objective_has_all_ones_pne() {
        let inst = BqpInstance::new(vec![vec![0]], vec![1]).unwrap();
        let g = reduce_bqp_to_game::<Rational>(&inst).unwrap();
        assert!(!is_pne(&g, &Profile(vec![0])));
        assert!(is_pne(&g, &Profile(vec![1])));
    }

    #[test]
    fn anticorrelated_pair() {
        let inst = BqpInstance::new(vec![vec![0, -4], vec![-4, 0]], vec![1, 1]).unwrap();
        // Objective: 0, 1, 1, -2 at 00, 10, 01, 11.
        assert_eq!(inst.objective(&[0, 0]), Rational::from_int(0));
        assert_eq!(inst.objective(&[1, 0]), Rational::from_int(1));
        assert_eq!(inst.objective(&[0, 1]), Rational::from_int(1));
        assert_eq!(inst.objective(&[1, 1]), Rational::from_int(-2));
        let g = reduce_bqp_to_game::<Rational>(&inst).unwrap();
        let pne: Vec<Profile> = (0..4u64)
            .map(|idx| Profile::from_index(idx, &[2, 2]))
            .filter(|p| is_pne(&g, p))
            .collect();
        assert_eq!(pne, vec![Profile(vec![1, 0]), Profile(vec![0, 1])]);
    }

    #[test]
    fn half_integral_objectives_are_exact() {
        // Odd diagonal entry: objective gains 1/2 * 3 when x_0 = 1.
        let inst = BqpInstance::new(vec![vec![3]], vec![0]).unwrap();
        assert_eq!(inst.objective(&[1]), Rational::new(3, 2));
    }

    #[test]
    fn pne_set_equals_local_optimum_set_randomly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6);
            let matrix: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(-8..=8)).collect()).collect();
            let q: Vec<i64> = (0..n).map(|_| rng.gen_range(-8..=8)).collect();
            let inst = BqpInstance::new(matrix, q).unwrap();
            let g = reduce_bqp_to_game::<Rational>(&inst).unwrap();
            assert!(verify_potential(&g, 1 << 20).unwrap().is_potential());
            let counts = vec![2usize; n];
            for idx in 0..profile_count(&counts).unwrap() {
                let p = Profile::from_index(idx, &counts);
                assert_eq!(is_pne(&g, &p), inst.is_local_optimum(&p.0), "n={n} at {p}");
            }
        }
    }

    #[test]
    fn rejects_ragged_matrices() {
        assert!(BqpInstance::new(vec![vec![0, 1]], vec![1]).is_err());
        assert!(BqpInstance::new(vec![], vec![]).is_err());
    }
}

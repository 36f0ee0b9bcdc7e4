//! Exact potential verification and potential evaluation.
//!
//! A finite game is an exact potential game iff every two-player
//! four-cycle of unilateral deviations has zero signed utility-change sum;
//! `verify_potential` checks this exhaustively and tabulates the potential
//! by path summation from the all-zeros base profile.

use super::{classify, profile_count, GameView, Profile};
use crate::error::{Error, Result};
use crate::scalar::Scalar;


/// A four-cycle witness that a game is not a potential game: starting at
/// `profile`, deviate player `players.0` to `deviations.0`, then player
/// `players.1` to `deviations.1`, then both back. The signed sum of the
/// four utility changes is `residual != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourCycle<R> {
    pub profile: Profile,
    pub players: (usize, usize),
    pub deviations: (usize, usize),
    pub residual: R,
}

impl<R: Scalar> FourCycle<R> {
    /// Recomputes the cycle sum against the game.
    pub fn recheck<G: GameView<R> + ?Sized>(&self, g: &G) -> R {
        cycle_residual(g, &self.profile, self.players, self.deviations)
    }
}

fn cycle_residual<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    a: &Profile,
    (i, j): (usize, usize),
    (ai, aj): (usize, usize),
) -> R {
    let mut b = a.clone();
    b.0[i] = ai;
    let mut c = b.clone();
    c.0[j] = aj;
    let mut d = a.clone();
    d.0[j] = aj;
    // u_i change a->b, u_j change b->c, u_i change c->d, u_j change d->a.
    (g.utility(i, &b) - g.utility(i, a))
        + (g.utility(j, &c) - g.utility(j, &b))
        + (g.utility(i, &d) - g.utility(i, &c))
        + (g.utility(j, a) - g.utility(j, &d))
}

/// Outcome of [`verify_potential`]: either the tabulated potential
/// (normalized to 0 at the all-zeros base profile) or a four-cycle
/// counterexample.
#[derive(Debug, Clone)]
pub enum PotentialCertificate<R> {
    Potential {
        /// `phi[profile_index]`, with `phi[base] == 0`.
        phi: Vec<R>,
    },
    NotPotential(FourCycle<R>),
}

impl<R: Scalar> PotentialCertificate<R> {
    pub fn is_potential(&self) -> bool {
        matches!(self, PotentialCertificate::Potential { .. })
    }

    pub fn phi(&self) -> Option<&[R]> {
        match self {
            PotentialCertificate::Potential { phi } => Some(phi),
            PotentialCertificate::NotPotential(_) => None,
        }
    }
}

/// Exhaustively decides whether `g` is an exact potential game.
///
/// On success the potential is tabulated by path summation from the
/// all-zeros profile and satisfies the potential identity on every
/// unilateral deviation edge. `budget` caps the number of profiles.
pub fn verify_potential<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    budget: u64,
) -> Result<PotentialCertificate<R>> {
    let counts = g.action_counts().to_vec();
    let total = profile_count(&counts)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total as u128, budget });
    }
    let n = counts.len();

    // Four-cycle closure check over all profiles and deviation pairs.
    for idx in 0..total {
        let a = Profile::from_index(idx, &counts);
        for i in 0..n {
            // Only cycles from the current action avoid double counting;
            // deviations to every alternative are covered by enumeration.
            for j in (i + 1)..n {
                for ai in 0..counts[i] {
                    if ai == a.0[i] {
                        continue;
                    }
                    for aj in 0..counts[j] {
                        if aj == a.0[j] {
                            continue;
                        }
                        let residual = cycle_residual(g, &a, (i, j), (ai, aj));
                        if !residual.is_zero() {
                            return Ok(PotentialCertificate::NotPotential(FourCycle {
                                profile: a,
                                players: (i, j),
                                deviations: (ai, aj),
                                residual,
                            }));
                        }
                    }
                }
            }
        }
    }

    // Tabulate phi by path summation player by player; phi(base) = 0.
    // phi(a) = phi(predecessor with the highest switched player reset)
    //          + the utility change of that player.
    let mut phi = vec![R::zero(); total as usize];
    for idx in 1..total {
        let a = Profile::from_index(idx, &counts);
        // Highest player with a nonzero action: stepping it to zero gives
        // an already-computed predecessor (its index is smaller).
        let k = (0..n).rev().find(|&k| a.0[k] != 0).expect("nonzero profile");
        let mut prev = a.clone();
        prev.0[k] = 0;
        let delta = g.utility(k, &a) - g.utility(k, &prev);
        let prev_idx = prev.to_index(&counts);
        phi[idx as usize] = phi[prev_idx as usize].clone() + delta;
    }
    Ok(PotentialCertificate::Potential { phi })
}

/// Telescoped utility change along the interpolation from `base` to
/// `target` that switches players one at a time in `order`. For potential
/// games this equals `phi(target) - phi(base)` independently of `order`.
pub fn potential_along_path<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    base: &Profile,
    target: &Profile,
    order: &[usize],
) -> R {
    let mut current = base.clone();
    let mut total = R::zero();
    for &k in order {
        if current.0[k] == target.0[k] {
            continue;
        }
        let mut next = current.clone();
        next.0[k] = target.0[k];
        total = total + (g.utility(k, &next) - g.utility(k, &current));
        current = next;
    }
    total
}

/// The auxiliary potential: `phi(a) - phi(base)` while some player
/// worst-responds at `a`, and `bound` once no player does. `bound` must
/// exceed every achievable potential difference (for circuit games,
/// `n * 2^|C| + 1` suffices).
pub fn auxiliary_potential<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    a: &Profile,
    base: &Profile,
    bound: R,
) -> R {
    let someone_worst = (0..g.num_players()).any(|i| classify(g, i, a).is_worst);
    if someone_worst {
        let order: Vec<usize> = (0..g.num_players()).collect();
        potential_along_path(g, base, a, &order)
    } else {
        bound
    }
}

//! Deterministic local-search dynamics on potential games.

use crate::error::{Error, Result};
use crate::games::potential::{verify_potential, PotentialCertificate};
use crate::games::{classify, GameView, Profile};
use crate::Scalar;

/// One move in a dynamics trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub player: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub profile: Profile,
    pub trace: Vec<Step>,
}

/// From `start`, repeatedly let the lowest-index worst-responding player
/// switch to a maximum-gain alternative (ties broken towards the lowest
/// action index), until the profile has no worst responder. On an exact
/// potential game each move strictly increases the potential, so this
/// terminates at an NWR profile.
///
/// The potential certificate is checked up-front (within `budget`
/// four-cycle/profile evaluations); non-potential games are rejected
/// because the dynamics could otherwise cycle.
pub fn nwr_local_search<R: Scalar>(
    game: &dyn GameView<R>,
    start: Profile,
    budget: u64,
) -> Result<SearchResult> {
    let certificate = verify_potential(game, budget)?;
    let PotentialCertificate::Potential { phi } = &certificate else {
        return Err(Error::NotPotential("source game failed the potential check".into()));
    };
    let counts = game.action_counts();
    let mut current = start;
    if !current.in_range(counts) {
        return Err(Error::InvalidInput(format!("start profile {current} out of range")));
    }
    let mut trace = Vec::new();
    loop {
        let Some(player) = (0..game.num_players())
            .find(|&i| classify(game, i, &current).is_worst)
        else {
            return Ok(SearchResult { profile: current, trace });
        };
        let here = game.utility(player, &current);
        let from = current.0[player];
        let (to, _) = (0..counts[player])
            .filter(|&a| a != from)
            .map(|a| (a, game.utility(player, &current.with_action(player, a))))
            .max_by(|(a1, u1), (a2, u2)| u1.cmp(u2).then(a2.cmp(a1)))
            .expect("worst responder implies an alternative exists");
        let gain = game.utility(player, &current.with_action(player, to)) - here;
        debug_assert!(gain.is_positive());
        // Exact-potential bookkeeping: phi must rise by the same amount.
        let before = current.to_index(counts);
        current = current.with_action(player, to);
        let after = current.to_index(counts);
        debug_assert!(phi[after as usize].clone() - phi[before as usize].clone() == gain);
        trace.push(Step { player, from, to });
        if trace.len() as u64 > budget {
            return Err(Error::BudgetExceeded { needed: trace.len() as u128, budget });
        }
    }
}

/// Best-response dynamics: the lowest-index player not best-responding
/// switches to the lowest-index utility-maximizing action. Terminates at
/// a pure Nash equilibrium on exact potential games.
pub fn best_response_dynamics<R: Scalar>(
    game: &dyn GameView<R>,
    start: Profile,
    budget: u64,
) -> Result<SearchResult> {
    let certificate = verify_potential(game, budget)?;
    if !certificate.is_potential() {
        return Err(Error::NotPotential("source game failed the potential check".into()));
    }
    let counts = game.action_counts();
    let mut current = start;
    if !current.in_range(counts) {
        return Err(Error::InvalidInput(format!("start profile {current} out of range")));
    }
    let mut trace = Vec::new();
    loop {
        let Some(player) = (0..game.num_players())
            .find(|&i| !classify(game, i, &current).is_best)
        else {
            return Ok(SearchResult { profile: current, trace });
        };
        let from = current.0[player];
        let (to, _) = (0..counts[player])
            .map(|a| (a, game.utility(player, &current.with_action(player, a))))
            .max_by(|(a1, u1), (a2, u2)| u1.cmp(u2).then(a2.cmp(a1)))
            .expect("at least one action");
        current = current.with_action(player, to);
        trace.push(Step { player, from, to });
        if trace.len() as u64 > budget {
            return Err(Error::BudgetExceeded { needed: trace.len() as u128, budget });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{is_nwr, is_pne, random_potential_game, ExplicitGame};
    use crate::scalar::Rational;
    use rand::SeedableRng;

    #[test]
    fn coordination_game_runs_to_fixpoints() {
        let g = ExplicitGame::<Rational>::identical_interest(vec![2, 2], |p| {
            Rational::from_int((p.0[0] == p.0[1]) as i64)
        })
        .unwrap();
        let res = nwr_local_search(&g, Profile(vec![0, 1]), 1 << 16).unwrap();
        assert!(is_nwr(&g, &res.profile));
        let res = best_response_dynamics(&g, Profile(vec![0, 1]), 1 << 16).unwrap();
        assert!(is_pne(&g, &res.profile));
        // Lowest-index player moves first, ties to the lowest action.
        assert_eq!(res.trace[0], Step { player: 0, from: 0, to: 1 });
    }

    #[test]
    fn already_stable_profiles_return_empty_traces() {
        let g = ExplicitGame::<Rational>::identical_interest(vec![2, 2], |p| {
            Rational::from_int((p.0[0] + p.0[1]) as i64)
        })
        .unwrap();
        let res = best_response_dynamics(&g, Profile(vec![1, 1]), 1 << 16).unwrap();
        assert!(res.trace.is_empty());
        assert_eq!(res.profile, Profile(vec![1, 1]));
    }

    #[test]
    fn non_potential_games_are_rejected() {
        let g = crate::games::tests::matching_pennies();
        assert!(matches!(
            nwr_local_search(&g, Profile(vec![0, 0]), 1 << 16),
            Err(Error::NotPotential(_))
        ));
        assert!(matches!(
            best_response_dynamics(&g, Profile(vec![0, 0]), 1 << 16),
            Err(Error::NotPotential(_))
        ));
    }

    #[test]
    fn random_potential_games_terminate_everywhere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for trial in 0..10 {
            let g = random_potential_game::<Rational>(&mut rng, vec![3, 2, 3], 8);
            let counts = g.action_counts().to_vec();
            let total = crate::games::profile_count(&counts).unwrap();
            for idx in 0..total {
                let start = Profile::from_index(idx, &counts);
                let nwr = nwr_local_search(&g, start.clone(), 1 << 16).unwrap();
                assert!(is_nwr(&g, &nwr.profile), "trial {trial} start {start}");
                let pne = best_response_dynamics(&g, start, 1 << 16).unwrap();
                assert!(is_pne(&g, &pne.profile), "trial {trial}");
            }
        }
    }
}

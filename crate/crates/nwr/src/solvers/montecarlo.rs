//! Randomized search for (α, β) profiles by uniform profile sampling.

use crate::error::{Error, Result};
use crate::games::{qualifying_players, GameView, Profile, TopFracQuery};
use crate::scalar::Rational;
use crate::Scalar;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How a run ended. The procedure is false-biased: `Success` always
/// carries a profile that genuinely satisfies the (α, β) predicate, while
/// `Fallback` makes no claim about the returned profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonteCarloOutcome {
    Success { profile: Profile, qualifying: usize },
    Fallback { profile: Profile },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonteCarloReport {
    pub outcome: MonteCarloOutcome,
    /// Number of profiles drawn (≤ n).
    pub iterations: usize,
    pub seed: u64,
    /// Whether the `Σ β_i ≥ ⌈αn⌉` success guarantee applied to this run.
    pub guaranteed: bool,
}

impl MonteCarloReport {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, MonteCarloOutcome::Success { .. })
    }
}

/// `Σ_i β_i` with `β_i = ⌈β m_i⌉ / m_i`.
pub fn beta_mass(query: &TopFracQuery, action_counts: &[usize]) -> Rational {
    action_counts
        .iter()
        .fold(Rational::zero(), |acc, &m_i| acc + query.beta_i(m_i))
}

/// Whether the success guarantee's precondition `Σ β_i ≥ ⌈αn⌉` holds.
pub fn guarantee_holds(query: &TopFracQuery, action_counts: &[usize]) -> bool {
    let threshold = query.player_threshold(action_counts.len());
    beta_mass(query, action_counts) >= Rational::from_int(threshold as i64)
}

/// Draws up to `n` uniform profiles; returns success on the first draw
/// where at least `⌈αn⌉` players play a top-β action, otherwise falls
/// back to the last draw. Deterministic given `seed`.
///
/// When `guarantee_holds` is false the run still executes but the report
/// is flagged unguaranteed; pass `force = true` to acknowledge that.
pub fn monte_carlo_topfrac<R: Scalar>(
    game: &dyn GameView<R>,
    query: &TopFracQuery,
    seed: u64,
    force: bool,
) -> Result<MonteCarloReport> {
    let counts = game.action_counts();
    let n = game.num_players();
    if n == 0 {
        return Err(Error::InvalidInput("game has no players".into()));
    }
    let guaranteed = guarantee_holds(query, counts);
    if !guaranteed && !force {
        return Err(Error::InvalidInput(format!(
            "precondition sum(beta_i) >= ceil(alpha * n) fails ({} < {}); \
             rerun with force to sample anyway",
            beta_mass(query, counts).to_frac_string(),
            query.player_threshold(n)
        )));
    }
    let threshold = query.player_threshold(n) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Profile(vec![0; n]);
    for iteration in 1..=n {
        let profile = Profile((0..n).map(|i| rng.gen_range(0..counts[i])).collect());
        let qualifying = qualifying_players(game, &profile, query.beta);
        if qualifying >= threshold {
            return Ok(MonteCarloReport {
                outcome: MonteCarloOutcome::Success { profile, qualifying },
                iterations: iteration,
                seed,
                guaranteed,
            });
        }
        last = profile;
    }
    Ok(MonteCarloReport {
        outcome: MonteCarloOutcome::Fallback { profile: last },
        iterations: n,
        seed,
        guaranteed,
    })
}

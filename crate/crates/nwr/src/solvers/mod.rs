//! Exhaustive decision/search/counting over finite games.
//!
//! Enumeration order is the profile-index order (player 1 least
//! significant). The reported `profiles_scanned` is canonical: the index
//! of the first hit plus one (find/decide on a yes instance), or the
//! total profile count otherwise. It does not depend on the worker count.

pub mod local_search;
pub mod montecarlo;

use crate::error::{Error, Result};
use crate::games::{profile_count, GameView, Profile, TopFracQuery};
use crate::scalar::Rational;
use crate::Scalar;
use std::time::{Duration, Instant};

/// Which profile property is being solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    /// Pure Nash equilibrium: every player best-responds.
    Pne,
    /// No-worst-response profile: no player worst-responds.
    Nwr,
    /// At least `ceil(alpha * n)` players play a top-`beta` action.
    TopFrac(TopFracQuery),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Pne => "pne",
            Problem::Nwr => "nwr",
            Problem::TopFrac(_) => "topfrac",
        }
    }

    pub fn holds<R: Scalar>(&self, game: &dyn GameView<R>, profile: &Profile) -> bool {
        match self {
            Problem::Pne => crate::games::is_pne(game, profile),
            Problem::Nwr => crate::games::is_nwr(game, profile),
            Problem::TopFrac(query) => crate::games::satisfies_alpha_beta(game, profile, query),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Decide,
    Find,
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Exists(Profile),
    NotExists,
    Count(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub profiles_scanned: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Maximum number of profiles the solver may enumerate.
    pub budget: u64,
    /// Worker threads; results are identical for any value.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: 1 << 24, workers: 1 }
    }
}

/// Exhaustively solves `problem` on `game` in the given `mode`.
pub fn solve<R: Scalar>(
    game: &dyn GameView<R>,
    problem: &Problem,
    mode: Mode,
    options: &SolveOptions,
) -> Result<SolveResult> {
    let total = profile_count(game.action_counts())
        .ok_or_else(|| Error::InvalidInput("profile space overflows u64".into()))?;
    if total > options.budget {
        return Err(Error::BudgetExceeded { needed: total as u128, budget: options.budget });
    }
    let start = Instant::now();
    let workers = options.workers.max(1).min(total.max(1) as usize);
    let counts = game.action_counts();

    // Per-chunk result: (count of hits, first hit index within the chunk).
    let scan_chunk = |lo: u64, hi: u64| -> (u64, Option<u64>) {
        let mut hits = 0u64;
        let mut first = None;
        for idx in lo..hi {
            let profile = Profile::from_index(idx, counts);
            if problem.holds(game, &profile) {
                hits += 1;
                if first.is_none() {
                    first = Some(idx);
                }
                if mode != Mode::Count {
                    break;
                }
            }
        }
        (hits, first)
    };

    let (count, first_hit) = if workers == 1 || total == 0 {
        scan_chunk(0, total)
    } else {
        let chunk = total.div_ceil(workers as u64);
        let partials: Vec<(u64, Option<u64>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = total.min(lo + chunk);
                    scope.spawn(move || scan_chunk(lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver worker panicked")).collect()
        });
        partials.into_iter().fold((0u64, None::<u64>), |(c, f), (pc, pf)| {
            (c + pc, match (f, pf) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            })
        })
    };

    let profiles_scanned = match (mode, first_hit) {
        (Mode::Count, _) | (_, None) => total,
        (_, Some(idx)) => idx + 1,
    };
    let outcome = match mode {
        Mode::Count => Outcome::Count(count),
        Mode::Decide | Mode::Find => match first_hit {
            Some(idx) => Outcome::Exists(Profile::from_index(idx, counts)),
            None => Outcome::NotExists,
        },
    };
    Ok(SolveResult { outcome, profiles_scanned, elapsed: start.elapsed() })
}

/// Parameter-regime label for an (alpha, beta) query on an `n`-player
/// game with uniform action count `m` (`None` when counts differ).
pub fn topfrac_regime(query: &TopFracQuery, n: usize, uniform_m: Option<usize>) -> &'static str {
    let threshold = query.player_threshold(n); // ceil(alpha * n)
    let beta_n = query.beta * Rational::from_int(n as i64);
    if Rational::from_int(threshold as i64) < beta_n {
        return "rp";
    }
    if let Some(m) = uniform_m {
        let alpha_m = query.alpha * Rational::from_int(m as i64);
        let beta_m_ceil = crate::scalar::ceil_mul(*query.beta.numer(), *query.beta.denom(), m as u64);
        if alpha_m > Rational::from_int(beta_m_ceil as i64) {
            return "hard";
        }
    }
    "wedge"
}

//! Circuit satisfiability to NWR search.
//!
//! From a single-output circuit `C` over `n` variables and a parameter
//! `m >= 2`, build the `n*m`-player, `m`-action game with
//!
//! ```text
//! u_{i,l}(a) = (m+1) * f(a) + ((l + sum_{l'} a_{i,l'}) mod m)
//! ```
//!
//! where `f(a) = 1` iff every group is unanimous on a value in `{0,1}`
//! and the induced assignment satisfies `C`. NWR profiles of the game are
//! exactly the profiles with `f(a) = 1`, which correspond one-to-one to
//! satisfying assignments.

use crate::circuits::{compile_reduction1_payoff, Assignment, Circuit};
use crate::error::{Error, Result};
use crate::games::{CircuitGame, ExplicitGame, GameView, Profile};
use crate::Scalar;

pub struct SatReducedGame {
    source: Circuit,
    m: usize,
    /// Source variable count; the reduced game has `n * m` players.
    n: usize,
    action_counts: Vec<usize>,
    /// `C`'s truth table over all `2^n` assignments, input 1 at bit 0.
    truth: Vec<bool>,
}

impl SatReducedGame {
    pub fn new(source: Circuit, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("m must be >= 2, got {m}")));
        }
        source.validate().map_err(|violations| {
            Error::InvalidCircuit(
                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            )
        })?;
        if source.outputs.len() != 1 {
            return Err(Error::InvalidInput(format!(
                "source circuit must have one output, has {}",
                source.outputs.len()
            )));
        }
        let n = source.inputs.len();
        if n >= 20 {
            return Err(Error::InvalidInput(format!(
                "source has {n} inputs; truth-table precomputation capped at 20"
            )));
        }
        let compiled = source.compile()?;
        let truth = (0..1u32 << n)
            .map(|bits| {
                let assignment = Assignment((0..n).map(|k| (bits >> k) & 1 == 1).collect());
                compiled.eval(&assignment).map(|out| out[0])
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(SatReducedGame { action_counts: vec![m; n * m], source, m, n, truth })
    }

    pub fn source(&self) -> &Circuit {
        &self.source
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    /// Source variable owning reduced player `p` (both 0-based); players
    /// are ordered group-major, so group `i` holds players `i*m..(i+1)*m`.
    pub fn group_of(&self, player: usize) -> usize {
        player / self.m
    }

    /// The unanimous `{0,1}` value of each group, if all groups have one.
    pub fn unanimous_assignment(&self, profile: &Profile) -> Option<Assignment> {
        let mut tau = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let first = profile.0[i * self.m];
            if first > 1 || profile.0[i * self.m..(i + 1) * self.m].iter().any(|&a| a != first) {
                return None;
            }
            tau.push(first == 1);
        }
        Some(Assignment(tau))
    }

    /// The global indicator: 1 iff all groups are unanimous in `{0,1}`
    /// and the induced assignment satisfies the source circuit.
    pub fn f_indicator(&self, profile: &Profile) -> bool {
        self.unanimous_assignment(profile)
            .map(|tau| {
                let idx = tau.0.iter().enumerate().fold(0usize, |acc, (k, &b)| {
                    acc | ((b as usize) << k)
                });
                self.truth[idx]
            })
            .unwrap_or(false)
    }

    /// Maps an NWR profile back to a satisfying assignment of the source
    /// circuit; rejects profiles that are not NWR.
    pub fn pull_assignment(&self, profile: &Profile) -> Result<Assignment> {
        if !crate::games::is_nwr::<crate::scalar::Rational, _>(self, profile) {
            return Err(Error::InvalidInput(format!(
                "profile {profile} has a worst responder; nothing to pull back"
            )));
        }
        // NWR implies f(a) = 1, hence unanimity.
        Ok(self.unanimous_assignment(profile).expect("NWR profile is unanimous"))
    }

    pub fn to_explicit<R: Scalar>(&self) -> Result<ExplicitGame<R>> {
        ExplicitGame::from_view(self)
    }

    /// Compiles every payoff to a Boolean circuit and cross-checks the
    /// two forms on every profile.
    pub fn to_circuit_game(&self) -> Result<CircuitGame> {
        let payoffs = (0..self.n * self.m)
            .map(|p| {
                compile_reduction1_payoff(&self.source, self.m, p / self.m + 1, p % self.m + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let game = CircuitGame::new(self.action_counts.clone(), payoffs)?;
        let total = crate::games::profile_count(&self.action_counts)
            .ok_or_else(|| Error::InvalidInput("profile space overflows u64".into()))?;
        for idx in 0..total {
            let profile = Profile::from_index(idx, &self.action_counts);
            for player in 0..self.n * self.m {
                let direct: crate::scalar::Rational = self.utility(player, &profile);
                let compiled: crate::scalar::Rational = game.utility(player, &profile);
                if direct != compiled {
                    return Err(Error::InvalidCircuit(format!(
                        "compiled payoff disagrees with direct evaluation at {profile}, \
                         player {player}: {direct} vs {compiled}"
                    )));
                }
            }
        }
        Ok(game)
    }

    /// The `reduced-from` provenance line for emitted game files.
    pub fn provenance(&self, source_path: &str) -> String {
        format!("reduced-from sat source={source_path} m={}", self.m)
    }
}

impl<R: Scalar> GameView<R> for SatReducedGame {
    fn num_players(&self) -> usize {
        self.n * self.m
    }

    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn utility(&self, player: usize, profile: &Profile) -> R {
        let i = player / self.m;
        let l = player % self.m + 1; // 1-based in the formula
        let group_sum: usize = profile.0[i * self.m..(i + 1) * self.m].iter().sum();
        let local = (l + group_sum) % self.m;
        let global = if self.f_indicator(profile) { self.m + 1 } else { 0 };
        R::from_int((global + local) as i64)
    }
}

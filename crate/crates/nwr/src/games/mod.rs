//! Game abstraction and response classification.
//!
//! [`GameView`] is the uniform interface: player count, per-player action
//! counts, and an exact-rational utility oracle. Classification (best /
//! worst / top-β responses) and the PNE / NWR / (α,β) predicates live here;
//! everything compares exactly, nothing ever rounds.

pub mod io;
pub mod potential;

pub use potential::{
    auxiliary_potential, potential_along_path, verify_potential, FourCycle, PotentialCertificate,
};

use crate::circuits::{action_bits, PayoffCircuit};
use crate::error::{Error, Result};
use crate::scalar::{ceil_mul, Rational, Scalar};
use num_traits::Signed;

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Profile at enumeration index `idx` (player 1 least significant).
    pub fn from_index(mut idx: u64, action_counts: &[usize]) -> Profile {
        let mut actions = Vec::with_capacity(action_counts.len());
        for &m in action_counts {
            actions.push((idx % m as u64) as usize);
            idx /= m as u64;
        }
        Profile(actions)
    }

    /// Inverse of [`Profile::from_index`].
    pub fn to_index(&self, action_counts: &[usize]) -> u64 {
        let mut idx = 0u64;
        for (&a, &m) in self.0.iter().zip(action_counts).rev() {
            idx = idx * m as u64 + a as u64;
        }
        idx
    }

    pub fn in_range(&self, action_counts: &[usize]) -> bool {
        self.0.len() == action_counts.len()
            && self.0.iter().zip(action_counts).all(|(&a, &m)| a < m)
    }

    pub fn with_action(&self, player: usize, action: usize) -> Profile {
        let mut p = self.clone();
        p.0[player] = action;
        p
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Total number of profiles, or `None` on overflow.
pub fn profile_count(action_counts: &[usize]) -> Option<u64> {
    action_counts.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m as u64))
}

/// Uniform game abstraction. The utility oracle must be a pure, total
/// function of `(player, profile)`; all realizations are safe to query
/// concurrently.
pub trait GameView<R: Scalar>: Sync {
    fn num_players(&self) -> usize;
    fn action_counts(&self) -> &[usize];
    fn utility(&self, player: usize, profile: &Profile) -> R;
}

impl<R: Scalar, G: GameView<R> + ?Sized> GameView<R> for &G {
    fn num_players(&self) -> usize {
        (**self).num_players()
    }
    fn action_counts(&self) -> &[usize] {
        (**self).action_counts()
    }
    fn utility(&self, player: usize, profile: &Profile) -> R {
        (**self).utility(player, profile)
    }
}

/// Explicit payoff tables, one rational per (player, profile).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGame<R> {
    action_counts: Vec<usize>,
    /// Indexed `[player][profile_index]`.
    tables: Vec<Vec<R>>,
}

impl<R: Scalar> ExplicitGame<R> {
    pub fn new(action_counts: Vec<usize>, tables: Vec<Vec<R>>) -> Result<Self> {
        if action_counts.is_empty() || action_counts.contains(&0) {
            return Err(Error::InvalidInput("need n >= 1 players with m_i >= 1".into()));
        }
        let total = profile_count(&action_counts)
            .ok_or_else(|| Error::InvalidInput("profile space overflows u64".into()))?;
        if tables.len() != action_counts.len()
            || tables.iter().any(|t| t.len() as u64 != total)
        {
            return Err(Error::InvalidInput(format!(
                "payoff tables must be {} x {total}",
                action_counts.len()
            )));
        }
        Ok(ExplicitGame { action_counts, tables })
    }

    /// Builds the tables by evaluating `f(player, profile)`.
    pub fn tabulate(
        action_counts: Vec<usize>,
        mut f: impl FnMut(usize, &Profile) -> R,
    ) -> Result<Self> {
        let total = profile_count(&action_counts)
            .ok_or_else(|| Error::InvalidInput("profile space overflows u64".into()))?;
        let tables = (0..action_counts.len())
            .map(|i| {
                (0..total)
                    .map(|idx| f(i, &Profile::from_index(idx, &action_counts)))
                    .collect()
            })
            .collect();
        ExplicitGame::new(action_counts, tables)
    }

    /// Materializes any game view into explicit tables.
    pub fn from_view<G: GameView<R> + ?Sized>(g: &G) -> Result<Self> {
        Self::tabulate(g.action_counts().to_vec(), |i, a| g.utility(i, a))
    }

    /// Identical-interest game: every player gets the shared payoff.
    pub fn identical_interest(
        action_counts: Vec<usize>,
        shared: impl Fn(&Profile) -> R,
    ) -> Result<Self> {
        Self::tabulate(action_counts, |_, a| shared(a))
    }

    /// Applies a positive affine map `x -> scale * x + shift` to one
    /// player's payoffs. Ordinal classification is invariant under this.
    pub fn rescale_player(&mut self, player: usize, scale: R, shift: R) {
        assert!(scale.is_positive());
        for v in &mut self.tables[player] {
            *v = scale.clone() * v.clone() + shift.clone();
        }
    }
}

impl<R: Scalar> GameView<R> for ExplicitGame<R> {
    fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn utility(&self, player: usize, profile: &Profile) -> R {
        self.tables[player][profile.to_index(&self.action_counts) as usize].clone()
    }
}

/// A game whose payoffs are Boolean circuits over the profile's action
/// bits. Player `i` occupies `action_bits(m_i)` consecutive little-endian
/// input bits; encodings `>= m_i` never arise from valid profiles.
pub struct CircuitGame {
    action_counts: Vec<usize>,
    payoffs: Vec<PayoffCircuit>,
    compiled: Vec<crate::circuits::CompiledCircuit>,
    layout: Vec<usize>,
}

impl CircuitGame {
    pub fn new(action_counts: Vec<usize>, payoffs: Vec<PayoffCircuit>) -> Result<Self> {
        if action_counts.is_empty() || payoffs.len() != action_counts.len() {
            return Err(Error::InvalidInput(
                "need one payoff circuit per player".into(),
            ));
        }
        let layout: Vec<usize> = action_counts.iter().map(|&m| action_bits(m)).collect();
        let total_bits: usize = layout.iter().sum();
        let mut compiled = Vec::with_capacity(payoffs.len());
        for p in &payoffs {
            let c = p.circuit.compile()?;
            if c.num_inputs() != total_bits {
                return Err(Error::InvalidInput(format!(
                    "payoff circuit `{}` has {} inputs, profile encoding needs {total_bits}",
                    p.circuit.name,
                    c.num_inputs()
                )));
            }
            compiled.push(c);
        }
        Ok(CircuitGame { action_counts, payoffs, compiled, layout })
    }

    pub fn payoffs(&self) -> &[PayoffCircuit] {
        &self.payoffs
    }

    /// Little-endian action-bit encoding of a profile.
    pub fn encode(&self, profile: &Profile) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.layout.iter().sum());
        for (&a, &s) in profile.0.iter().zip(&self.layout) {
            for k in 0..s {
                bits.push((a >> k) & 1 == 1);
            }
        }
        bits
    }
}

impl<R: Scalar> GameView<R> for CircuitGame {
    fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn utility(&self, player: usize, profile: &Profile) -> R {
        let bits = self.encode(profile);
        let out = self.compiled[player]
            .eval(&crate::circuits::Assignment(bits))
            .expect("circuit game eval");
        let (num, den) = self.payoffs[player].decode(&out).expect("payoff decode");
        R::from_ratio(num, den)
    }
}

/// Number of actions strictly better than the current one:
/// `|{a_i' : u_i(a_i', a_-i) > u_i(a)}|`.
pub fn strictly_better_count<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    player: usize,
    profile: &Profile,
) -> usize {
    let current = g.utility(player, profile);
    (0..g.action_counts()[player])
        .filter(|&alt| alt != profile.0[player])
        .filter(|&alt| g.utility(player, &profile.with_action(player, alt)) > current)
        .count()
}

/// Best/worst response flags for one player at one profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResponseFlags {
    pub is_best: bool,
    pub is_worst: bool,
}

/// Classifies player `i`'s action at `a`. With a single action the player
/// is vacuously best-responding and never worst-responding; a bottom tie
/// likewise means no worst response (the definition is strict).
pub fn classify<R: Scalar, G: GameView<R> + ?Sized>(g: &G, player: usize, profile: &Profile) -> ResponseFlags {
    let m = g.action_counts()[player];
    if m == 1 {
        return ResponseFlags { is_best: true, is_worst: false };
    }
    let current = g.utility(player, profile);
    let mut better = 0usize;
    let mut strictly_above_all = true;
    for alt in (0..m).filter(|&alt| alt != profile.0[player]) {
        let v = g.utility(player, &profile.with_action(player, alt));
        if v > current {
            better += 1;
        } else {
            strictly_above_all = false;
        }
    }
    ResponseFlags { is_best: better == 0, is_worst: strictly_above_all && better == m - 1 }
}

/// True iff fewer than `beta * m_i` actions are strictly better (exact
/// rational comparison).
pub fn top_beta<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    player: usize,
    profile: &Profile,
    beta: Rational,
) -> bool {
    let m = g.action_counts()[player] as i64;
    let count = strictly_better_count(g, player, profile) as i64;
    // count < beta * m  <=>  count * den < num * m
    count * *beta.denom() < *beta.numer() * m
}

/// Thresholds for the (α, β) predicate. Both fractions are exact rationals
/// in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopFracQuery {
    pub alpha: Rational,
    pub beta: Rational,
}

impl TopFracQuery {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        let inside = |x: Rational| x.is_positive() && x < Rational::from_int(1);
        if !inside(alpha) || !inside(beta) {
            return Err(Error::InvalidInput(format!(
                "alpha and beta must lie in (0,1): got {alpha}, {beta}"
            )));
        }
        Ok(TopFracQuery { alpha, beta })
    }

    /// `ceil(alpha * n)`, the qualifying-player threshold.
    pub fn player_threshold(&self, n: usize) -> u64 {
        ceil_mul(*self.alpha.numer(), *self.alpha.denom(), n as u64)
    }

    /// `beta_i = ceil(beta * m_i) / m_i` for one player.
    pub fn beta_i(&self, m_i: usize) -> Rational {
        let top = ceil_mul(*self.beta.numer(), *self.beta.denom(), m_i as u64);
        Rational::from_ratio(top as i64, m_i as i64)
    }
}

/// Number of players playing a top-β action at `a`.
pub fn qualifying_players<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    profile: &Profile,
    beta: Rational,
) -> usize {
    (0..g.num_players()).filter(|&i| top_beta(g, i, profile, beta)).count()
}

pub fn is_pne<R: Scalar, G: GameView<R> + ?Sized>(g: &G, profile: &Profile) -> bool {
    (0..g.num_players()).all(|i| classify(g, i, profile).is_best)
}

pub fn is_nwr<R: Scalar, G: GameView<R> + ?Sized>(g: &G, profile: &Profile) -> bool {
    (0..g.num_players()).all(|i| !classify(g, i, profile).is_worst)
}

pub fn satisfies_alpha_beta<R: Scalar, G: GameView<R> + ?Sized>(
    g: &G,
    profile: &Profile,
    q: &TopFracQuery,
) -> bool {
    qualifying_players(g, profile, q.beta) as u64 >= q.player_threshold(g.num_players())
}

/// The cyclic game `u_i(a) = (i + sum_j a_j) mod m` with `n` players of `m`
/// actions each (`i` is 1-based in the formula).
pub fn harmonic_game<R: Scalar>(n: usize, m: usize) -> ExplicitGame<R> {
    ExplicitGame::tabulate(vec![m; n], |i, a| {
        let s: usize = a.0.iter().sum();
        R::from_int(((i + 1 + s) % m) as i64)
    })
    .expect("harmonic game construction")
}

/// A random potential game: a shared base payoff plus per-player offsets
/// that do not depend on the player's own action (so the base is an exact
/// potential).
pub fn random_potential_game<R: Scalar>(
    rng: &mut impl rand::Rng,
    action_counts: Vec<usize>,
    payoff_range: i64,
) -> ExplicitGame<R> {
    let total = profile_count(&action_counts).expect("profile count");
    let base: Vec<i64> = (0..total).map(|_| rng.gen_range(-payoff_range..=payoff_range)).collect();
    let n = action_counts.len();
    let offsets: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..total).map(|_| rng.gen_range(-payoff_range..=payoff_range)).collect())
        .collect();
    ExplicitGame::tabulate(action_counts.clone(), |i, a| {
        // The offset must be own-action invariant: index by a with a_i := 0.
        let opp = a.with_action(i, 0).to_index(&action_counts);
        let idx = a.to_index(&action_counts);
        R::from_int(base[idx as usize] + offsets[i][opp as usize])
    })
    .expect("random potential game")
}

/// A random explicit game with integer payoffs in `[-range, range]`.
pub fn random_game<R: Scalar>(
    rng: &mut impl rand::Rng,
    action_counts: Vec<usize>,
    range: i64,
) -> ExplicitGame<R> {
    ExplicitGame::tabulate(action_counts, |_, _| R::from_int(rng.gen_range(-range..=range)))
        .expect("random game")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::Rational;

    pub(crate) fn matching_pennies() -> ExplicitGame<Rational> {
        // Payoffs +-1; player 1 wants to match, player 2 wants to mismatch.
        ExplicitGame::tabulate(vec![2, 2], |i, a| {
            let matched = a.0[0] == a.0[1];
            let win = if i == 0 { matched } else { !matched };
            Rational::from_int(if win { 1 } else { -1 })
        })
        .unwrap()
    }

    fn all_equal(n: usize, m: usize) -> ExplicitGame<Rational> {
        ExplicitGame::tabulate(vec![m; n], |_, _| Rational::from_int(7)).unwrap()
    }

    #[test]
    fn profile_indexing_round_trip() {
        let counts = [2usize, 3, 2];
        for idx in 0..12u64 {
            let p = Profile::from_index(idx, &counts);
            assert!(p.in_range(&counts));
            assert_eq!(p.to_index(&counts), idx);
        }
        // Player 1 is least significant.
        assert_eq!(Profile::from_index(1, &counts).0, vec![1, 0, 0]);
    }

    #[test]
    fn strictly_better_counts() {
        let g = all_equal(2, 3);
        for idx in 0..9 {
            let p = Profile::from_index(idx, g.action_counts());
            assert_eq!(strictly_better_count(&g, 0, &p), 0);
            assert_eq!(strictly_better_count(&g, 1, &p), 0);
        }

        let chain = ExplicitGame::tabulate(vec![3], |_, a| Rational::from_int(a.0[0] as i64))
            .unwrap();
        assert_eq!(strictly_better_count(&chain, 0, &Profile(vec![0])), 2);

        let mp = matching_pennies();
        for idx in 0..4 {
            let p = Profile::from_index(idx, mp.action_counts());
            for i in 0..2 {
                // 2x2 with +-1 payoffs: the alternative is strictly better
                // for exactly one of the two players.
                let c = strictly_better_count(&mp, i, &p);
                assert!(c <= 1);
            }
            assert_eq!(
                strictly_better_count(&mp, 0, &p) + strictly_better_count(&mp, 1, &p),
                1
            );
        }
    }

    #[test]
    fn classify_ties_and_single_action() {
        let g = all_equal(2, 2);
        let p = Profile(vec![0, 1]);
        let f = classify(&g, 0, &p);
        assert!(f.is_best && !f.is_worst);

        let solo = ExplicitGame::tabulate(vec![1, 2], |_, _| Rational::from_int(0)).unwrap();
        let f = classify(&solo, 0, &Profile(vec![0, 1]));
        assert!(f.is_best && !f.is_worst);
    }

    #[test]
    fn classify_total_order_chain() {
        let chain = ExplicitGame::tabulate(vec![3], |_, a| Rational::from_int(a.0[0] as i64))
            .unwrap();
        let f = classify(&chain, 0, &Profile(vec![0]));
        assert!(f.is_worst && !f.is_best);
        // top_beta(2/3): 2 strictly better is not < (2/3)*3 = 2.
        assert!(!top_beta(&chain, 0, &Profile(vec![0]), Rational::from_ratio(2, 3)));
        assert!(top_beta(&chain, 0, &Profile(vec![1]), Rational::from_ratio(2, 3)));
    }

    #[test]
    fn pne_nwr_alpha_beta_on_small_games() {
        let g = all_equal(2, 2);
        let q = TopFracQuery::new(Rational::from_ratio(1, 2), Rational::from_ratio(1, 2)).unwrap();
        for idx in 0..4 {
            let p = Profile::from_index(idx, g.action_counts());
            assert!(is_pne(&g, &p));
            assert!(is_nwr(&g, &p));
            assert!(satisfies_alpha_beta(&g, &p, &q));
        }

        let mp = matching_pennies();
        for idx in 0..4 {
            let p = Profile::from_index(idx, mp.action_counts());
            assert!(!is_pne(&mp, &p));
            assert!(!is_nwr(&mp, &p));
        }
    }

    #[test]
    fn pne_implies_nwr_when_alternatives_exist() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let g: ExplicitGame<Rational> = random_game(&mut rng, vec![2, 3, 2], 3);
            for idx in 0..12 {
                let p = Profile::from_index(idx, g.action_counts());
                if is_pne(&g, &p) {
                    assert!(is_nwr(&g, &p));
                }
            }
        }
    }

    #[test]
    fn harmonic_game_payoffs_are_cyclic() {
        let g: ExplicitGame<Rational> = harmonic_game(2, 2);
        let p = Profile(vec![0, 0]);
        assert_eq!(g.utility(0, &p), Rational::from_int(1)); // (1 + 0) mod 2
        assert_eq!(g.utility(1, &p), Rational::from_int(0)); // (2 + 0) mod 2
    }

    #[test]
    fn thresholds_use_exact_ceilings() {
        let q = TopFracQuery::new(Rational::from_ratio(1, 2), Rational::from_ratio(1, 3)).unwrap();
        assert_eq!(q.player_threshold(3), 2); // ceil(3/2)
        assert_eq!(q.player_threshold(4), 2);
        assert_eq!(q.beta_i(4), Rational::from_ratio(2, 4)); // ceil(4/3)/4 = 2/4
        assert!(TopFracQuery::new(Rational::from_int(1), Rational::from_ratio(1, 2)).is_err());
    }
}

//! PNE search in two-action potential games to NWR search in mhat-action
//! potential games.
//!
//! Each source player `i` becomes a group of `q` reduced players with
//! `mhat` actions each; a verified ★-gadget `rho` maps each group's
//! subprofile back to a source action, and reduced utilities are
//! `u_hat_{i,l}(a_hat) = u_i(rho(a_hat))`. Property ★ makes NWR profiles
//! of the reduced game correspond exactly to preimages of source PNE, and
//! the composition `phi(rho(.))` stays an exact potential.

use crate::error::{Error, Result};
use crate::gadgets::GadgetTable;
use crate::games::potential::verify_potential;
use crate::games::{ExplicitGame, GameView, Profile};
use crate::scalar::Rational;
use crate::Scalar;

pub struct PneReducedGame<R: Scalar> {
    source: ExplicitGame<R>,
    gadget: GadgetTable,
    action_counts: Vec<usize>,
}

impl<R: Scalar> PneReducedGame<R> {
    /// Builds the reduced game. The source must be a two-action exact
    /// potential game (checked within `budget` profiles) and the gadget
    /// must be ★-verified with source action count 2.
    pub fn new(source: ExplicitGame<R>, gadget: GadgetTable, budget: u64) -> Result<Self> {
        if source.action_counts().iter().any(|&m| m != 2) {
            return Err(Error::InvalidInput(
                "source game must have exactly 2 actions per player".into(),
            ));
        }
        if !gadget.is_verified() {
            return Err(Error::UnverifiedGadget);
        }
        if gadget.m() != 2 {
            return Err(Error::InvalidInput(format!(
                "gadget maps to {} source actions, source game has 2",
                gadget.m()
            )));
        }
        if !verify_potential(&source, budget)?.is_potential() {
            return Err(Error::NotPotential("source game failed the potential check".into()));
        }
        let n = source.action_counts().len();
        let action_counts = vec![gadget.mhat(); n * gadget.q()];
        Ok(PneReducedGame { source, gadget, action_counts })
    }

    pub fn source(&self) -> &ExplicitGame<R> {
        &self.source
    }

    pub fn gadget(&self) -> &GadgetTable {
        &self.gadget
    }

    pub fn q(&self) -> usize {
        self.gadget.q()
    }

    /// Source player owning reduced player `p`; groups are contiguous.
    pub fn group_of(&self, player: usize) -> usize {
        player / self.gadget.q()
    }

    /// Applies the gadget to group `i`'s subprofile.
    pub fn rho_group(&self, profile: &Profile, i: usize) -> usize {
        let q = self.gadget.q();
        self.gadget.apply(&profile.0[i * q..(i + 1) * q])
    }

    /// `rho(a_hat)`: the induced source profile.
    pub fn rho(&self, profile: &Profile) -> Profile {
        let n = self.source.action_counts().len();
        Profile((0..n).map(|i| self.rho_group(profile, i)).collect())
    }

    /// Maps an NWR profile of the reduced game to a PNE of the source;
    /// rejects profiles that are not NWR.
    pub fn pull_profile(&self, profile: &Profile) -> Result<Profile> {
        if !crate::games::is_nwr::<R, _>(self, profile) {
            return Err(Error::InvalidInput(format!(
                "profile {profile} has a worst responder; nothing to pull back"
            )));
        }
        let pulled = self.rho(profile);
        debug_assert!(crate::games::is_pne(&self.source, &pulled));
        Ok(pulled)
    }

    pub fn to_explicit(&self) -> Result<ExplicitGame<R>> {
        ExplicitGame::from_view(self)
    }

    /// The `reduced-from` provenance line for emitted game files.
    pub fn provenance(&self, source_path: &str, gadget_path: &str) -> String {
        format!(
            "reduced-from pne source={source_path} m=2 mhat={} q={} gadget={gadget_path}",
            self.gadget.mhat(),
            self.gadget.q()
        )
    }
}

impl<R: Scalar> GameView<R> for PneReducedGame<R> {
    fn num_players(&self) -> usize {
        self.action_counts.len()
    }

    fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn utility(&self, player: usize, profile: &Profile) -> R {
        self.source.utility(self.group_of(player), &self.rho(profile))
    }
}

/// Smallest-q verified gadgets for the reduction at `m = 2`.
pub fn default_gadget(mhat: usize) -> Result<GadgetTable> {
    crate::gadgets::search_smallest_q(2, mhat, 6)
        .ok_or_else(|| Error::InvalidInput(format!("no gadget found for mhat = {mhat}")))
}

/// Convenience alias for the common exact-rational instantiation.
pub type PneReducedGameRat = PneReducedGame<Rational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{is_nwr, is_pne, profile_count, random_potential_game};
    use rand::SeedableRng;

    fn identity_gadget() -> GadgetTable {
        let mut g = GadgetTable::new(2, 2, 1, vec![0, 1]).unwrap();
        g.verify_star(1 << 20).unwrap();
        g
    }

    fn one_player_chain() -> ExplicitGame<Rational> {
        ExplicitGame::tabulate(vec![2], |_, p| Rational::from_int(p.0[0] as i64)).unwrap()
    }

    #[test]
    fn identity_gadget_reduction_is_the_identity() {
        let rg = PneReducedGame::new(one_player_chain(), identity_gadget(), 1 << 16).unwrap();
        assert_eq!(GameView::<Rational>::action_counts(&rg), &[2]);
        for a in [0usize, 1] {
            let p = Profile(vec![a]);
            assert_eq!(rg.rho(&p), p);
            assert_eq!(
                GameView::<Rational>::utility(&rg, 0, &p),
                Rational::from_int(a as i64)
            );
        }
        assert!(is_nwr::<Rational, _>(&rg, &Profile(vec![1])));
        assert!(!is_nwr::<Rational, _>(&rg, &Profile(vec![0])));
        assert_eq!(rg.pull_profile(&Profile(vec![1])).unwrap(), Profile(vec![1]));
        assert!(rg.pull_profile(&Profile(vec![0])).is_err());
    }

    #[test]
    fn coordination_game_unique_nwr() {
        // Identical-interest 2x2 game with strict maximum at (1,1): the
        // only source PNE profile with no preimage ambiguity under the
        // identity gadget.
        let g = ExplicitGame::<Rational>::identical_interest(vec![2, 2], |p| {
            Rational::from_int(match (p.0[0], p.0[1]) {
                (1, 1) => 3,
                (0, 0) => 1,
                _ => 0,
            })
        })
        .unwrap();
        let rg = PneReducedGame::new(g, identity_gadget(), 1 << 16).unwrap();
        let counts = GameView::<Rational>::action_counts(&rg).to_vec();
        let nwr: Vec<Profile> = (0..profile_count(&counts).unwrap())
            .map(|idx| Profile::from_index(idx, &counts))
            .filter(|p| is_nwr::<Rational, _>(&rg, p))
            .collect();
        // (0,0) is also a source PNE (both deviations strictly drop), so
        // the NWR set under the identity gadget is exactly the PNE set.
        assert_eq!(nwr, vec![Profile(vec![0, 0]), Profile(vec![1, 1])]);
    }

    #[test]
    fn rejects_bad_inputs() {
        // Unverified gadget.
        let raw = GadgetTable::new(2, 2, 1, vec![0, 1]).unwrap();
        assert!(matches!(
            PneReducedGame::new(one_player_chain(), raw, 1 << 16),
            Err(Error::UnverifiedGadget)
        ));
        // Non-potential source.
        let mp = crate::games::tests::matching_pennies();
        assert!(matches!(
            PneReducedGame::new(mp, identity_gadget(), 1 << 16),
            Err(Error::NotPotential(_))
        ));
        // Wrong action count.
        let g3 = ExplicitGame::<Rational>::identical_interest(vec![3], |p| {
            Rational::from_int(p.0[0] as i64)
        })
        .unwrap();
        assert!(PneReducedGame::new(g3, identity_gadget(), 1 << 16).is_err());
    }

    /// Exhaustive two-sided correspondence for one game/gadget pair.
    fn check_correspondence(rg: &PneReducedGame<Rational>) {
        let counts = GameView::<Rational>::action_counts(rg).to_vec();
        for idx in 0..profile_count(&counts).unwrap() {
            let p = Profile::from_index(idx, &counts);
            let lhs = is_nwr::<Rational, _>(rg, &p);
            let rhs = is_pne(rg.source(), &rg.rho(&p));
            assert_eq!(lhs, rhs, "at {p}");
        }
    }

    #[test]
    fn nwr_iff_source_pne_with_searched_gadget() {
        let gadget = crate::gadgets::search_smallest_q(2, 3, 4).expect("(2,3,4) gadget");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            // 2 source players -> 8 reduced players, 3^8 = 6561 profiles.
            let g = random_potential_game::<Rational>(&mut rng, vec![2, 2], 6);
            let rg = PneReducedGame::new(g, gadget.clone(), 1 << 16).unwrap();
            check_correspondence(&rg);
            // The reduction preserves potentials: phi_source(rho(.)) works.
            assert!(verify_potential(&rg, 1 << 20).unwrap().is_potential());
        }
    }

    #[test]
    fn reduced_game_stays_potential_with_identity_gadget() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let g = random_potential_game::<Rational>(&mut rng, vec![2, 2, 2], 5);
            let rg = PneReducedGame::new(g, identity_gadget(), 1 << 16).unwrap();
            assert!(verify_potential(&rg, 1 << 20).unwrap().is_potential());
            check_correspondence(&rg);
        }
    }
}

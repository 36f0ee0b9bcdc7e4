//! Text formats for games.
//!
//! Explicit games:
//!
//! ```text
//! game explicit
//! players <n>
//! actions <m_1> ... <m_n>
//! <a_1> ... <a_n> : <num>/<den> ... <num>/<den>
//! ```
//!
//! with one payoff line per profile in lexicographic order. Circuit games
//! replace the payoff lines with `payoffs <file_1> ... <file_n>` referencing
//! payoff-circuit files (relative to the game file). Reduced games written
//! by the CLI carry a leading `reduced-from ...` provenance line, which the
//! parser preserves verbatim.

use super::{profile_count, CircuitGame, ExplicitGame, GameView, Profile};
use crate::circuits::parse_payoff;
use crate::error::{Error, ParseError, Result};
use crate::scalar::Scalar;
use std::path::Path;

/// A parsed game file.
pub enum GameFile<R> {
    Explicit(ExplicitGame<R>),
    Circuit(CircuitGame),
}

impl<R: Scalar> GameFile<R> {
    pub fn view(&self) -> &dyn GameView<R> {
        match self {
            GameFile::Explicit(g) => g,
            GameFile::Circuit(g) => g,
        }
    }
}

/// A game file plus its optional provenance header.
pub struct LoadedGame<R> {
    pub provenance: Option<String>,
    pub game: GameFile<R>,
}

/// Serializes an explicit game; profiles are written in lexicographic
/// order (last player varies fastest, matching string order of the lines).
pub fn write_explicit<R: Scalar>(g: &ExplicitGame<R>) -> String {
    let counts = g.action_counts();
    let n = counts.len();
    let mut out = String::new();
    out.push_str("game explicit\n");
    out.push_str(&format!("players {n}\n"));
    let ms: Vec<String> = counts.iter().map(|m| m.to_string()).collect();
    out.push_str(&format!("actions {}\n", ms.join(" ")));
    let total = profile_count(counts).expect("explicit game fits");
    let mut lex = vec![0usize; n];
    for _ in 0..total {
        let profile = Profile(lex.clone());
        let actions: Vec<String> = lex.iter().map(|a| a.to_string()).collect();
        let payoffs: Vec<String> =
            (0..n).map(|i| g.utility(i, &profile).to_frac_string()).collect();
        out.push_str(&format!("{} : {}\n", actions.join(" "), payoffs.join(" ")));
        // Lexicographic successor: bump the last player first.
        for k in (0..n).rev() {
            lex[k] += 1;
            if lex[k] < counts[k] {
                break;
            }
            lex[k] = 0;
        }
    }
    out
}

pub fn parse_game<R: Scalar>(text: &str, base_dir: &Path) -> Result<LoadedGame<R>> {
    let mut provenance = None;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, raw)| (k + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (lno, mut header) = lines.next().ok_or_else(|| ParseError::new("empty game file"))?;
    if header.starts_with("reduced-from") {
        provenance = Some(header.to_string());
        (_, header) = lines
            .next()
            .ok_or_else(|| ParseError::at(lno, "missing game declaration"))?;
    }
    let kind = match header {
        "game explicit" => "explicit",
        "game circuit" => "circuit",
        other => {
            return Err(ParseError::at(lno, format!("expected `game explicit|circuit`, got `{other}`"))
                .into())
        }
    };

    let (lno, players_line) =
        lines.next().ok_or_else(|| ParseError::new("missing players line"))?;
    let n: usize = players_line
        .strip_prefix("players ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| ParseError::at(lno, "expected `players <n>`"))?;

    let (lno, actions_line) =
        lines.next().ok_or_else(|| ParseError::new("missing actions line"))?;
    let counts: Vec<usize> = actions_line
        .strip_prefix("actions ")
        .map(|s| s.split_whitespace().map(|t| t.parse::<usize>()).collect::<Result<Vec<_>, _>>())
        .transpose()
        .ok()
        .flatten()
        .ok_or_else(|| ParseError::at(lno, "expected `actions <m_1> ... <m_n>`"))?;
    if counts.len() != n || counts.contains(&0) {
        return Err(ParseError::at(lno, format!("need {n} positive action counts")).into());
    }

    let game = if kind == "explicit" {
        let total = profile_count(&counts)
            .ok_or_else(|| Error::InvalidInput("profile space overflows u64".into()))?;
        let mut tables: Vec<Vec<Option<R>>> = vec![vec![None; total as usize]; n];
        let mut seen = 0u64;
        for (lno, line) in lines {
            let (profile_part, payoff_part) = line
                .split_once(':')
                .ok_or_else(|| ParseError::at(lno, "expected `<actions> : <payoffs>`"))?;
            let actions: Vec<usize> = profile_part
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| ParseError::at(lno, "bad action index"))?;
            let profile = Profile(actions);
            if !profile.in_range(&counts) {
                return Err(ParseError::at(lno, "profile out of range").into());
            }
            let payoffs: Vec<R> = payoff_part
                .split_whitespace()
                .map(|t| R::parse_frac(t).map_err(|e| ParseError::at(lno, e.message)))
                .collect::<Result<_, _>>()?;
            if payoffs.len() != n {
                return Err(ParseError::at(lno, format!("expected {n} payoffs")).into());
            }
            let idx = profile.to_index(&counts) as usize;
            for (i, v) in payoffs.into_iter().enumerate() {
                if tables[i][idx].replace(v).is_some() {
                    return Err(ParseError::at(lno, "duplicate profile line").into());
                }
            }
            seen += 1;
        }
        if seen != total {
            return Err(ParseError::new(format!(
                "expected {total} profile lines, found {seen}"
            ))
            .into());
        }
        let tables: Vec<Vec<R>> =
            tables.into_iter().map(|t| t.into_iter().map(|v| v.unwrap()).collect()).collect();
        GameFile::Explicit(ExplicitGame::new(counts, tables)?)
    } else {
        let (lno, payoffs_line) =
            lines.next().ok_or_else(|| ParseError::new("missing payoffs line"))?;
        let files: Vec<&str> = payoffs_line
            .strip_prefix("payoffs ")
            .map(|s| s.split_whitespace().collect())
            .ok_or_else(|| ParseError::at(lno, "expected `payoffs <file>...`"))?;
        if files.len() != n {
            return Err(ParseError::at(lno, format!("expected {n} payoff files")).into());
        }
        let payoffs = files
            .iter()
            .map(|f| {
                let path = base_dir.join(f);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
                parse_payoff(&text)
            })
            .collect::<Result<Vec<_>>>()?;
        GameFile::Circuit(CircuitGame::new(counts, payoffs)?)
    };
    Ok(LoadedGame { provenance, game })
}

pub fn load_game<R: Scalar>(path: &Path) -> Result<LoadedGame<R>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_game(&text, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn explicit_round_trip() {
        let g = crate::games::tests::matching_pennies();
        let text = write_explicit(&g);
        let loaded: LoadedGame<Rational> = parse_game(&text, Path::new(".")).unwrap();
        match loaded.game {
            GameFile::Explicit(back) => assert_eq!(back, g),
            GameFile::Circuit(_) => panic!("expected explicit"),
        }
        assert!(loaded.provenance.is_none());
    }

    #[test]
    fn provenance_line_is_preserved() {
        let g = crate::games::tests::matching_pennies();
        let text = format!("reduced-from sat source=c.cir m=2\n{}", write_explicit(&g));
        let loaded: LoadedGame<Rational> = parse_game(&text, Path::new(".")).unwrap();
        assert_eq!(loaded.provenance.as_deref(), Some("reduced-from sat source=c.cir m=2"));
    }

    #[test]
    fn missing_profile_line_rejected() {
        let text = "game explicit\nplayers 1\nactions 2\n0 : 1/1\n";
        let err = parse_game::<Rational>(text, Path::new(".")).map(|_| ()).unwrap_err();
        assert!(err.to_string().contains("expected 2 profile lines"), "{err}");
    }

    #[test]
    fn decimal_payoffs_rejected() {
        let text = "game explicit\nplayers 1\nactions 1\n0 : 0.5\n";
        assert!(parse_game::<Rational>(text, Path::new(".")).is_err());
    }
}

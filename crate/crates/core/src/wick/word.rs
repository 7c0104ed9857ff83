use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word accepted by the parser and the normal-ordering routines.
pub const MAX_WORD_LEN: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Annihilation `a`.
    A,
    /// Creation `a*`.
    AStar,
}

/// A product of single-mode ladder operators, leftmost letter acting last.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::SizeGuard {
                what: "operator word length",
                size: letters.len() as u128,
                limit: MAX_WORD_LEN as u128,
            });
        }
        Ok(Word(letters))
    }

    /// `a^p a*^q`.
    pub fn anti_normal(p: usize, q: usize) -> Result<Self> {
        let mut v = vec![Letter::A; p];
        v.extend(std::iter::repeat_n(Letter::AStar, q));
        Word::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions `i` with `a a*` at `(i, i + 1)`.
    pub fn redexes(&self) -> Vec<usize> {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == Letter::A && w[1] == Letter::AStar)
            .map(|(i, _)| i)
            .collect()
    }

    /// `(p, q)` if the word is `a*^p a^q`.
    pub fn normal_degrees(&self) -> Option<(u32, u32)> {
        let p = self.0.iter().take_while(|&&l| l == Letter::AStar).count();
        if self.0[p..].iter().all(|&l| l == Letter::A) {
            Some((p as u32, (self.0.len() - p) as u32))
        } else {
            None
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(match l {
                Letter::A => "a",
                Letter::AStar => "a*",
            })?;
        }
        Ok(())
    }
}

/// Whitespace-separated tokens `a`, `a*` (also `a†`), each optionally
/// raised to a power as in `a^3` or `a*^2`. `1` and the empty string give
/// the empty word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, power) = match token.split_once('^') {
                Some((b, p)) => {
                    let p: usize = p
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    (b, p)
                }
                None => (token, 1),
            };
            let letter = match base {
                "a" => Letter::A,
                "a*" | "a†" => Letter::AStar,
                _ => return Err(Error::Parse(format!("unknown operator `{base}`"))),
            };
            let total = letters.len().saturating_add(power);
            if total > MAX_WORD_LEN {
                return Err(Error::SizeGuard {
                    what: "operator word length",
                    size: total as u128,
                    limit: MAX_WORD_LEN as u128,
                });
            }
            letters.extend(std::iter::repeat_n(letter, power));
        }
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let w: Word = "a a* a a*".parse().unwrap();
        assert_eq!(w.0, vec![Letter::A, Letter::AStar, Letter::A, Letter::AStar]);
        assert_eq!("a^2 a*^2".parse::<Word>().unwrap(), Word::anti_normal(2, 2).unwrap());
        assert_eq!("".parse::<Word>().unwrap(), Word::default());
        assert_eq!("1".parse::<Word>().unwrap().to_string(), "1");
        assert!("b".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
        assert!("a^41".parse::<Word>().is_err());
        assert!("a a^18446744073709551615".parse::<Word>().is_err());
        assert!(matches!("a^20 a*^21".parse::<Word>(), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn normal_degrees() {
        assert_eq!("a* a* a".parse::<Word>().unwrap().normal_degrees(), Some((2, 1)));
        assert_eq!("a a*".parse::<Word>().unwrap().normal_degrees(), None);
        assert_eq!(Word::default().normal_degrees(), Some((0, 0)));
    }

    proptest! {
        #[test]
        fn display_round_trip(v in proptest::collection::vec(any::<bool>(), 0..=MAX_WORD_LEN)) {
            let w = Word(v.into_iter().map(|b| if b { Letter::A } else { Letter::AStar }).collect());
            prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }

        #[test]
        fn parser_never_panics(s in "\\PC{0,64}") {
            let _ = s.parse::<Word>();
        }
    }
}

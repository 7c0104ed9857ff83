//! Named state families, as used on the command line:
//! `hartree`, `hartree-sup`, `random-pure`, `random-mixed[:rank=R]`,
//! `max-mixed`, `bose-hubbard[:J=x,U=y]`.

use std::fmt;
use std::str::FromStr;

use crate::ckmr::haar_sample;
use crate::error::{Error, Result};
use crate::fock::SpaceShape;
use crate::states::{
    bose_hubbard_ground_state, haar_random_pure, hartree_state, hartree_superposition, maximally_mixed, random_mixed,
    MixedState,
};

/// Rank used by `random-mixed` when none is given, capped by the dimension.
pub const DEFAULT_RANK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateFamily {
    /// `u^{⊗N}` with `u` Haar-random from the seed.
    Hartree,
    /// Normalized `u^{⊗N} + v^{⊗N}` with `u, v` Haar-random from the seed.
    HartreeSup,
    RandomPure,
    RandomMixed {
        rank: Option<usize>,
    },
    MaxMixed,
    /// Ground state of the two-mode Bose-Hubbard Hamiltonian; `d = 2` only.
    BoseHubbard {
        hopping: f64,
        interaction: f64,
    },
}

impl StateFamily {
    pub const NAMES: [&'static str; 6] = [
        "hartree",
        "hartree-sup",
        "random-pure",
        "random-mixed",
        "max-mixed",
        "bose-hubbard",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Hartree => "hartree",
            StateFamily::HartreeSup => "hartree-sup",
            StateFamily::RandomPure => "random-pure",
            StateFamily::RandomMixed { .. } => "random-mixed",
            StateFamily::MaxMixed => "max-mixed",
            StateFamily::BoseHubbard { .. } => "bose-hubbard",
        }
    }

    /// One representative of every family with default parameters.
    pub fn all() -> Vec<StateFamily> {
        vec![
            StateFamily::Hartree,
            StateFamily::HartreeSup,
            StateFamily::RandomPure,
            StateFamily::RandomMixed { rank: None },
            StateFamily::MaxMixed,
            StateFamily::BoseHubbard {
                hopping: 1.0,
                interaction: 1.0,
            },
        ]
    }

    /// Whether the family exists for `d` modes.
    pub fn supports(&self, d: usize) -> bool {
        !matches!(self, StateFamily::BoseHubbard { .. }) || d == 2
    }

    pub fn build(&self, d: usize, particles: usize, seed: u64) -> Result<MixedState> {
        let shape = SpaceShape::new(d, particles)?;
        match *self {
            StateFamily::Hartree => hartree_state(&haar_sample(d, seed, 0), particles),
            StateFamily::HartreeSup => {
                if d == 1 {
                    return Err(Error::Colinear);
                }
                hartree_superposition(&haar_sample(d, seed, 0), &haar_sample(d, seed, 1), particles)
            }
            StateFamily::RandomPure => Ok(haar_random_pure(shape, seed)),
            StateFamily::RandomMixed { rank } => {
                random_mixed(shape, rank.unwrap_or(DEFAULT_RANK.min(shape.dim())), seed)
            }
            StateFamily::MaxMixed => Ok(maximally_mixed(shape)),
            StateFamily::BoseHubbard { hopping, interaction } => {
                if d != 2 {
                    return Err(Error::InvalidArgument(format!("bose-hubbard needs d=2, got d={d}")));
                }
                Ok(bose_hubbard_ground_state(particles, hopping, interaction)?.state)
            }
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            StateFamily::RandomMixed { rank: Some(r) } => write!(f, ":rank={r}"),
            StateFamily::BoseHubbard { hopping, interaction } => write!(f, ":J={hopping},U={interaction}"),
            _ => Ok(()),
        }
    }
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: `{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{key}: `{value}` is not finite")));
    }
    Ok(v)
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let pairs: Vec<(&str, &str)> = match params {
            None => Vec::new(),
            Some(p) => p
                .split(',')
                .map(|kv| {
                    kv.split_once('=')
                        .map(|(k, v)| (k.trim(), v.trim()))
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))
                })
                .collect::<Result<_>>()?,
        };
        let unknown = |k: &str| Error::Parse(format!("unknown parameter `{k}` for `{name}`"));
        let simple = |family: StateFamily| match pairs.first() {
            Some((k, _)) => Err(unknown(k)),
            None => Ok(family),
        };
        match name {
            "hartree" => simple(StateFamily::Hartree),
            "hartree-sup" => simple(StateFamily::HartreeSup),
            "random-pure" => simple(StateFamily::RandomPure),
            "max-mixed" => simple(StateFamily::MaxMixed),
            "random-mixed" => {
                let mut rank = None;
                for (k, v) in pairs {
                    match k {
                        "rank" if rank.is_none() => {
                            let r: usize = v
                                .parse()
                                .map_err(|_| Error::Parse(format!("rank: `{v}` is not a positive integer")))?;
                            if r == 0 {
                                return Err(Error::Parse("rank must be positive".into()));
                            }
                            rank = Some(r);
                        }
                        _ => return Err(unknown(k)),
                    }
                }
                Ok(StateFamily::RandomMixed { rank })
            }
            "bose-hubbard" => {
                let (mut hopping, mut interaction) = (None, None);
                for (k, v) in pairs {
                    match k {
                        "J" if hopping.is_none() => hopping = Some(parse_real(k, v)?),
                        "U" if interaction.is_none() => interaction = Some(parse_real(k, v)?),
                        _ => return Err(unknown(k)),
                    }
                }
                let (hopping, interaction) = (hopping.unwrap_or(1.0), interaction.unwrap_or(1.0));
                if hopping < 0.0 {
                    return Err(Error::Parse(format!("J must be non-negative, got {hopping}")));
                }
                if hopping == 0.0 && interaction == 0.0 {
                    return Err(Error::Parse("J and U cannot both vanish".into()));
                }
                Ok(StateFamily::BoseHubbard { hopping, interaction })
            }
            _ => Err(Error::Parse(format!(
                "unknown state family `{name}` (expected one of {})",
                StateFamily::NAMES.join(", ")
            ))),
        }
    }
}

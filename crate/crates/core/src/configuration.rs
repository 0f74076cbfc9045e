//! Electronic configurations of two-electron ions.
//!
//! Only the closed shell `1s2 1S` and the singly excited triplets
//! `1sns 3S` (n = 2..4), `1snp 3P` (n = 2, 3) and `1s3d 3D` are accepted.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const L_LETTERS: [char; 4] = ['s', 'p', 'd', 'f'];

/// One spatial shell `nl` with its electron count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shell {
    pub n: usize,
    pub l: usize,
    pub occupation: usize,
}

impl Shell {
    pub fn label(&self) -> String {
        format!("{}{}", self.n, L_LETTERS[self.l])
    }

    /// Eigenstate index inside the `l` channel (number of radial nodes).
    pub fn radial_index(&self) -> usize {
        self.n - self.l - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinCoupling {
    Singlet,
    Triplet,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    shells: Vec<Shell>,
    coupling: SpinCoupling,
}

impl Configuration {
    /// `1s2 1S`
    pub fn ground() -> Self {
        Self { shells: vec![Shell { n: 1, l: 0, occupation: 2 }], coupling: SpinCoupling::Singlet }
    }

    /// `1snl` triplet with both electrons in the same spin channel.
    pub fn triplet(n: usize, l: usize) -> Result<Self> {
        let ok = match l {
            0 => (2..=4).contains(&n),
            1 => (2..=3).contains(&n),
            2 => n == 3,
            _ => false,
        };
        if !ok {
            let name = L_LETTERS.get(l).map(|c| format!("1s{n}{c}")).unwrap_or_else(|| format!("1s n={n} l={l}"));
            return Err(Error::UnsupportedConfiguration(format!("{name} triplet is outside the supported set")));
        }
        Ok(Self {
            shells: vec![Shell { n: 1, l: 0, occupation: 1 }, Shell { n, l, occupation: 1 }],
            coupling: SpinCoupling::Triplet,
        })
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn coupling(&self) -> SpinCoupling {
        self.coupling
    }

    pub fn electrons(&self) -> usize {
        self.shells.iter().map(|s| s.occupation).sum()
    }

    /// Shells occupied in each spin channel (each singly occupied there).
    pub fn spin_channels(&self) -> [Vec<Shell>; 2] {
        let single = |s: &Shell| Shell { occupation: 1, ..*s };
        match self.coupling {
            SpinCoupling::Singlet => {
                let up: Vec<Shell> = self.shells.iter().map(single).collect();
                [up.clone(), up]
            }
            SpinCoupling::Triplet => [self.shells.iter().map(single).collect(), Vec::new()],
        }
    }

    /// Largest angular momentum present.
    pub fn max_l(&self) -> usize {
        self.shells.iter().map(|s| s.l).max().unwrap_or(0)
    }

    /// Canonical ASCII label, e.g. `1s2 1S` or `1s2p 3P`.
    pub fn label(&self) -> String {
        match self.coupling {
            SpinCoupling::Singlet => "1s2 1S".to_string(),
            SpinCoupling::Triplet => {
                let outer = self.shells[1];
                format!("1s{} 3{}", outer.label(), L_LETTERS[outer.l].to_ascii_uppercase())
            }
        }
    }

    /// Filesystem-friendly label, e.g. `1s2_1S`.
    pub fn slug(&self) -> String {
        self.label().replace(' ', "_")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn normalise(c: char) -> char {
    match c {
        '⁰' => '0',
        '¹' => '1',
        '²' => '2',
        '³' => '3',
        '⁴' => '4',
        '⁵' => '5',
        '⁶' => '6',
        '⁷' => '7',
        '⁸' => '8',
        '⁹' => '9',
        _ => c,
    }
}

fn parse_shells(text: &str) -> Result<Vec<Shell>> {
    let chars: Vec<char> = text.chars().filter(|&c| c != '^').collect();
    let bad = || Error::InvalidConfiguration(format!("cannot parse orbital list `{text}`"));
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    let mut shells = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let n: usize = digits(&mut i).parse().map_err(|_| bad())?;
        let letter = chars.get(i).ok_or_else(bad)?.to_ascii_lowercase();
        let l = L_LETTERS.iter().position(|&c| c == letter).ok_or_else(bad)?;
        i += 1;
        let save = i;
        let occ_text = digits(&mut i);
        let occupation = if occ_text.is_empty() {
            1
        } else if i < chars.len() && chars[i].is_ascii_alphabetic() {
            // digits start the next shell
            i = save;
            1
        } else {
            occ_text.parse().map_err(|_| bad())?
        };
        if n == 0 || l >= n {
            return Err(Error::InvalidConfiguration(format!("shell {n}{letter} does not exist")));
        }
        if occupation == 0 || occupation > 2 * (2 * l + 1) {
            return Err(Error::InvalidConfiguration(format!("occupation {occupation} invalid for {n}{letter}")));
        }
        shells.push(Shell { n, l, occupation });
    }
    Ok(shells)
}

impl FromStr for Configuration {
    type Err = Error;

    /// Accepts `ground`, `1s2`, `1s^2 1S`, `1s²`, `1s2s 3S`, `1s3d ³D`, ...
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.trim().chars().map(normalise).collect();
        if text.eq_ignore_ascii_case("ground") {
            return Ok(Self::ground());
        }
        let mut parts = text.split_whitespace();
        let orbitals = parts.next().ok_or_else(|| Error::InvalidConfiguration("empty label".into()))?;
        let term = parts.next();
        if parts.next().is_some() {
            return Err(Error::InvalidConfiguration(format!("trailing text in `{s}`")));
        }
        let shells = parse_shells(orbitals)?;
        let term = term
            .map(|t| {
                let mut it = t.chars();
                let mult = it.next().and_then(|c| c.to_digit(10));
                let big_l = it.next().map(|c| c.to_ascii_lowercase());
                match (mult, big_l, it.next()) {
                    (Some(m), Some(c), None) => L_LETTERS
                        .iter()
                        .position(|&x| x == c)
                        .map(|lt| (m, lt))
                        .ok_or_else(|| Error::InvalidConfiguration(format!("bad term symbol `{t}`"))),
                    _ => Err(Error::InvalidConfiguration(format!("bad term symbol `{t}`"))),
                }
            })
            .transpose()?;

        let total: usize = shells.iter().map(|sh| sh.occupation).sum();
        if total != 2 {
            return Err(Error::UnsupportedConfiguration(format!("`{s}` has {total} electrons; only two-electron states are supported")));
        }
        match shells.as_slice() {
            [Shell { n: 1, l: 0, occupation: 2 }] => match term {
                None | Some((1, 0)) => Ok(Self::ground()),
                Some(_) => Err(Error::InvalidConfiguration(format!("`{s}`: 1s2 only forms a 1S term"))),
            },
            [Shell { n: 1, l: 0, occupation: 1 }, outer] if outer.occupation == 1 => match term {
                None => Self::triplet(outer.n, outer.l),
                Some((3, lt)) if lt == outer.l => Self::triplet(outer.n, outer.l),
                Some((1, lt)) if lt == outer.l => {
                    Err(Error::UnsupportedConfiguration(format!("`{s}`: singlet excited states are not supported")))
                }
                Some(_) => Err(Error::InvalidConfiguration(format!("`{s}`: term does not match the configuration"))),
            },
            _ => Err(Error::UnsupportedConfiguration(format!("`{s}` is outside the supported set"))),
        }
    }
}

/// All supported configurations, ground state first.
pub fn supported_configurations() -> Vec<Configuration> {
    let mut all = vec![Configuration::ground()];
    for (n, l) in [(2, 0), (3, 0), (4, 0), (2, 1), (3, 1), (3, 2)] {
        all.push(Configuration::triplet(n, l).expect("supported triplet"));
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels() {
        let g: Configuration = "1s2 1S".parse().unwrap();
        assert_eq!(g, Configuration::ground());
        assert_eq!("ground".parse::<Configuration>().unwrap(), g);
        assert_eq!("1s²".parse::<Configuration>().unwrap(), g);
        assert_eq!("1s^2 1S".parse::<Configuration>().unwrap(), g);
        let t: Configuration = "1s2p ³P".parse().unwrap();
        assert_eq!(t, Configuration::triplet(2, 1).unwrap());
        assert_eq!(t.label(), "1s2p 3P");
        assert_eq!("1s4s".parse::<Configuration>().unwrap().label(), "1s4s 3S");
        assert_eq!("1s3d 3D".parse::<Configuration>().unwrap().max_l(), 2);
    }

    #[test]
    fn labels_round_trip() {
        for c in supported_configurations() {
            assert_eq!(c.label().parse::<Configuration>().unwrap(), c);
            assert_eq!(c.electrons(), 2);
        }
    }

    #[test]
    fn rejects_out_of_scope() {
        for bad in ["1s5s 3S", "1s2s 1S", "1s4p", "1s2p 3S", "2s2", "1s3", "1s2s2p", "xyz", "2p2"] {
            assert!(bad.parse::<Configuration>().is_err(), "{bad}");
        }
    }

    #[test]
    fn spin_channels() {
        let [up, down] = Configuration::ground().spin_channels();
        assert_eq!(up.len(), 1);
        assert_eq!(down.len(), 1);
        let [up, down] = Configuration::triplet(3, 2).unwrap().spin_channels();
        assert_eq!(up.len(), 2);
        assert!(down.is_empty());
        assert_eq!(up[1].radial_index(), 0);
        assert_eq!(Configuration::triplet(4, 0).unwrap().shells()[1].radial_index(), 3);
    }
}

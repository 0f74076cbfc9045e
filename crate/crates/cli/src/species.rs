use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// The three ions of the helium isoelectronic series handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Species {
    He,
    #[serde(rename = "Li+")]
    LiPlus,
    #[serde(rename = "Be2+")]
    Be2Plus,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::He, Species::LiPlus, Species::Be2Plus];

    pub fn z(self) -> f64 {
        match self {
            Species::He => 2.0,
            Species::LiPlus => 3.0,
            Species::Be2Plus => 4.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Species::He => "He",
            Species::LiPlus => "Li+",
            Species::Be2Plus => "Be2+",
        }
    }

    /// Element symbol, safe in file names.
    pub fn slug(self) -> &'static str {
        match self {
            Species::He => "He",
            Species::LiPlus => "Li",
            Species::Be2Plus => "Be",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Species {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '⁺' => '+',
                '²' => '2',
                _ => c,
            })
            .filter(|c| !matches!(c, '^' | '{' | '}' | '$'))
            .collect();
        match t.as_str() {
            "He" | "2" => Ok(Species::He),
            "Li+" | "Li" | "3" => Ok(Species::LiPlus),
            "Be2+" | "Be++" | "Be" | "4" => Ok(Species::Be2Plus),
            _ => Err(format!("unknown species `{s}` (expected He, Li+ or Be2+)")),
        }
    }
}

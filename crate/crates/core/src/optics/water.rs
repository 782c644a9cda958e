use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jerlov optical water types: open ocean (I–III) and coastal (1–9).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum WaterType {
    IA,
    IB,
    II,
    III,
    C1,
    C3,
    C5,
    C7,
    C9,
}

// Per-meter transmittance e^{-c}, tabulated with rows blue, green, red.
const TABLE_BLUE: [f64; 9] = [0.98, 0.97, 0.94, 0.89, 0.88, 0.8, 0.67, 0.5, 0.29];
const TABLE_GREEN: [f64; 9] = [0.96, 0.95, 0.93, 0.89, 0.89, 0.82, 0.73, 0.61, 0.46];
const TABLE_RED: [f64; 9] = [0.81, 0.83, 0.80, 0.75, 0.75, 0.71, 0.67, 0.62, 0.55];

impl WaterType {
    pub const ALL: [WaterType; 9] = [
        WaterType::IA,
        WaterType::IB,
        WaterType::II,
        WaterType::III,
        WaterType::C1,
        WaterType::C3,
        WaterType::C5,
        WaterType::C7,
        WaterType::C9,
    ];

    fn column(self) -> usize {
        self as usize
    }

    /// Canonical short name: `IA`, `IB`, `II`, `III`, `1`, `3`, `5`, `7`, `9`.
    pub fn name(self) -> &'static str {
        match self {
            WaterType::IA => "IA",
            WaterType::IB => "IB",
            WaterType::II => "II",
            WaterType::III => "III",
            WaterType::C1 => "1",
            WaterType::C3 => "3",
            WaterType::C5 => "5",
            WaterType::C7 => "7",
            WaterType::C9 => "9",
        }
    }

    /// Fraction of light surviving one meter of water, in R, G, B order.
    pub fn per_meter_transmittance(self) -> [f64; 3] {
        let i = self.column();
        [TABLE_RED[i], TABLE_GREEN[i], TABLE_BLUE[i]]
    }

    /// Attenuation coefficients `c = −ln(e^{−c})` per meter, R, G, B.
    pub fn attenuation(self) -> [f64; 3] {
        self.per_meter_transmittance().map(|t| -t.ln())
    }
}

impl fmt::Display for WaterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaterType {
    type Err = Error;

    /// Accepts the canonical names plus a `C`-prefixed form for coastal
    /// types (`C3` ≡ `3`), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let key = upper.strip_prefix('C').unwrap_or(&upper);
        Ok(match key {
            "IA" => WaterType::IA,
            "IB" => WaterType::IB,
            "II" => WaterType::II,
            "III" => WaterType::III,
            "1" => WaterType::C1,
            "3" => WaterType::C3,
            "5" => WaterType::C5,
            "7" => WaterType::C7,
            "9" => WaterType::C9,
            _ => return Err(Error::Config(format!("unknown water type {s:?}"))),
        })
    }
}

impl TryFrom<String> for WaterType {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WaterType> for String {
    fn from(w: WaterType) -> String {
        w.name().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coastal_three_reorders_rows() {
        assert_eq!(WaterType::C3.per_meter_transmittance(), [0.71, 0.82, 0.8]);
    }

    #[test]
    fn attenuation_positive_everywhere() {
        for w in WaterType::ALL {
            for (c, t) in w.attenuation().iter().zip(w.per_meter_transmittance()) {
                assert!(*c > 0.0);
                assert!(t > 0.0 && t < 1.0);
            }
        }
    }

    #[test]
    fn parses_both_spellings() {
        assert_eq!("C3".parse::<WaterType>().unwrap(), WaterType::C3);
        assert_eq!("3".parse::<WaterType>().unwrap(), WaterType::C3);
        assert_eq!("iii".parse::<WaterType>().unwrap(), WaterType::III);
        assert!("C4".parse::<WaterType>().is_err());
        for w in WaterType::ALL {
            assert_eq!(w.name().parse::<WaterType>().unwrap(), w);
        }
    }
}

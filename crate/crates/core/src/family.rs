use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The four series families `sum a_n phi_n(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `phi_n(z) = exp(-lambda_n z)`
    Dirichlet,
    /// `phi_n(z) = z^n`
    Power,
    /// `phi_n(z) = J_n(z)`
    Neumann,
    /// `phi_n(z) = J_n(n z)`
    Kapteyn,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown series family `{0}` (expected dirichlet, power, neumann or kapteyn)")]
pub struct UnknownFamily(pub String);

impl Family {
    pub const ALL: [Family; 4] = [Family::Dirichlet, Family::Power, Family::Neumann, Family::Kapteyn];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dirichlet => "dirichlet",
            Family::Power => "power",
            Family::Neumann => "neumann",
            Family::Kapteyn => "kapteyn",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = UnknownFamily;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(Family::Dirichlet),
            "power" => Ok(Family::Power),
            "neumann" => Ok(Family::Neumann),
            "kapteyn" => Ok(Family::Kapteyn),
            other => Err(UnknownFamily(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!(" Kapteyn ".parse::<Family>().unwrap(), Family::Kapteyn);
        assert!("laurent".parse::<Family>().is_err());
    }
}

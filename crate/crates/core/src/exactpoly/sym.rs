use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::PolyError;

/// Parameter symbols of the fKdV ansatz machinery.
///
/// The alphabet is closed. The derived `Ord` is the canonical symbol order
/// used by monomial ordering and by the branch solver's tie-breaking:
/// `a0 < a1 < … < b1 < b2 < … < k < λ < μ < r < e < ρ < α < β < γ < ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    /// Ansatz coefficient `a_j`.
    A(u8),
    /// Projective ansatz coefficient `b_j` (j ≥ 1).
    B(u8),
    /// Riccati constant in `φ' = k + φ²`.
    K,
    /// Wave speed in `ξ = x + λt`.
    Lambda,
    Mu,
    R,
    E,
    Rho,
    Alpha,
    Beta,
    Gamma,
    Omega,
}

impl Sym {
    pub fn name(&self) -> String {
        match self {
            Sym::A(j) => format!("a{j}"),
            Sym::B(j) => format!("b{j}"),
            Sym::K => "k".into(),
            Sym::Lambda => "lambda".into(),
            Sym::Mu => "mu".into(),
            Sym::R => "r".into(),
            Sym::E => "e".into(),
            Sym::Rho => "rho".into(),
            Sym::Alpha => "alpha".into(),
            Sym::Beta => "beta".into(),
            Sym::Gamma => "gamma".into(),
            Sym::Omega => "omega".into(),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            Sym::A(j) => format!("a_{{{j}}}"),
            Sym::B(j) => format!("b_{{{j}}}"),
            Sym::K => "k".into(),
            Sym::Lambda => "\\lambda".into(),
            Sym::Mu => "\\mu".into(),
            Sym::R => "r".into(),
            Sym::E => "e".into(),
            Sym::Rho => "\\rho".into(),
            Sym::Alpha => "\\alpha".into(),
            Sym::Beta => "\\beta".into(),
            Sym::Gamma => "\\gamma".into(),
            Sym::Omega => "\\omega".into(),
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Sym {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indexed = |rest: &str| rest.parse::<u8>().ok();
        let sym = match s {
            "k" => Sym::K,
            "lambda" | "λ" => Sym::Lambda,
            "mu" | "μ" => Sym::Mu,
            "r" => Sym::R,
            "e" => Sym::E,
            "rho" | "ρ" => Sym::Rho,
            "alpha" | "α" => Sym::Alpha,
            "beta" | "β" => Sym::Beta,
            "gamma" | "γ" => Sym::Gamma,
            "omega" | "ω" => Sym::Omega,
            _ => match (s.strip_prefix('a'), s.strip_prefix('b')) {
                (Some(rest), _) if indexed(rest).is_some() => Sym::A(indexed(rest).unwrap()),
                (_, Some(rest)) if indexed(rest).is_some_and(|j| j >= 1) => {
                    Sym::B(indexed(rest).unwrap())
                }
                _ => return Err(PolyError::UnknownSymbol(s.to_string())),
            },
        };
        Ok(sym)
    }
}

impl Serialize for Sym {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_follows_alphabet() {
        let listed = [
            Sym::A(0),
            Sym::A(1),
            Sym::A(2),
            Sym::B(1),
            Sym::B(2),
            Sym::K,
            Sym::Lambda,
            Sym::Mu,
            Sym::R,
            Sym::E,
            Sym::Rho,
            Sym::Alpha,
            Sym::Beta,
            Sym::Gamma,
            Sym::Omega,
        ];
        assert!(listed.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn names_round_trip() {
        for s in [Sym::A(3), Sym::B(1), Sym::Lambda, Sym::Rho, Sym::Omega] {
            assert_eq!(s.name().parse::<Sym>().unwrap(), s);
        }
        assert!("b0".parse::<Sym>().is_err());
        assert!("x".parse::<Sym>().is_err());
    }
}

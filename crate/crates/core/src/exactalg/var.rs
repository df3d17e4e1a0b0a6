use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A named symbol. The derived ordering is the global variable order used by
/// every canonical form: `p < t < q < X1 < X2 < … < Y < y1 < y2 < … < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The residue characteristic.
    P,
    /// Stands for `p^{-s}`.
    T,
    /// Field size in flag-variety counts.
    Q,
    /// Flag-function indeterminate `X_i` (1-based).
    X(u32),
    /// Auxiliary indeterminate of the point-correction term.
    Y,
    /// Coordinate `y_k` of the centre (1-based).
    Coord(u32),
    /// Symbolic number of points on the Pfaffian hypersurface.
    N,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::P => f.write_str("p"),
            Var::T => f.write_str("t"),
            Var::Q => f.write_str("q"),
            Var::X(i) => write!(f, "X{i}"),
            Var::Y => f.write_str("Y"),
            Var::Coord(k) => write!(f, "y{k}"),
            Var::N => f.write_str("n"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed = |rest: &str| -> Option<u32> {
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok().filter(|&i| i >= 1)
        };
        match s {
            "p" => Ok(Var::P),
            "t" => Ok(Var::T),
            "q" => Ok(Var::Q),
            "Y" => Ok(Var::Y),
            "n" => Ok(Var::N),
            _ => {
                if let Some(i) = s.strip_prefix('X').and_then(indexed) {
                    Ok(Var::X(i))
                } else if let Some(k) = s.strip_prefix('y').and_then(indexed) {
                    Ok(Var::Coord(k))
                } else {
                    Err(Error::Parse(format!("unknown variable `{s}`")))
                }
            }
        }
    }
}

//! Run configuration: pyramid, shape, truncation order and the optional
//! corruption used for negative controls.

use std::str::FromStr;
use thiserror::Error;
use yw_core::pyramid::parse_list;
use yw_core::{GenKey, GeneratorTable, Kind, Pyramid, Shape, ShiftMatrix, YwError};

/// Failures of the command line layer; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// The library rejected the input.
    #[error("{0}")]
    Core(#[from] YwError),
    /// A flag value could not be interpreted.
    #[error("usage: {0}")]
    Usage(String),
    /// Writing the output file failed.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// How the shape ν is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeArg {
    /// `1ⁿ`.
    Ones,
    /// The coarsest admissible shape.
    Minimal,
    /// An explicit composition of `n`.
    Parts(Vec<usize>),
}

impl FromStr for ShapeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<ShapeArg, String> {
        match s {
            "ones" => Ok(ShapeArg::Ones),
            "minimal" => Ok(ShapeArg::Minimal),
            _ => parse_list(s).map(ShapeArg::Parts).map_err(|e| e.to_string()),
        }
    }
}

/// A generator `KIND:a:i:j:r` to corrupt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corruption {
    /// The targeted generator.
    pub key: GenKey,
}

impl FromStr for Corruption {
    type Err = String;

    fn from_str(s: &str) -> Result<Corruption, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(format!("expected KIND:a:i:j:r, got {s:?}"));
        }
        let kind = match parts[0] {
            "D" => Kind::D,
            "Dt" => Kind::Dt,
            "E" => Kind::E,
            "F" => Kind::F,
            k => return Err(format!("unknown generator kind {k:?} (expected D, Dt, E or F)")),
        };
        let num = |t: &str| t.parse::<usize>().map_err(|_| format!("bad index {t:?} in {s:?}"));
        Ok(Corruption { key: GenKey::new(kind, num(parts[1])?, num(parts[2])?, num(parts[3])?, num(parts[4])?) })
    }
}

impl Corruption {
    /// The path-sum coefficient `T_{row,col;x}^{(r)}` the generator is read
    /// from, as `(row, col, x, r)`.
    pub fn path_entry(&self, nu: &Shape) -> (usize, usize, usize, usize) {
        let k = self.key;
        let (c0, c1) = (nu.cut(k.a - 1), nu.cut(k.a));
        match k.kind {
            Kind::D => (c0 + k.i, c0 + k.j, c0, k.r),
            Kind::Dt => (c0 + k.i, c0 + k.j, c1, k.r),
            Kind::E => (c0 + k.i, c1 + k.j, c1, k.r),
            Kind::F => (c1 + k.i, c0 + k.j, c1, k.r),
        }
    }

    /// Errors unless the generator exists in the table of `(ν, σ, K)`.
    pub fn validate(&self, nu: &Shape, sigma: &ShiftMatrix, k: usize) -> Result<(), CliError> {
        if GeneratorTable::index_set(nu, sigma, k).contains(&self.key) {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "--corrupt target {} is not a generator of shape {:?} up to K = {k}",
                self.label(),
                nu.parts()
            )))
        }
    }

    /// `KIND:a:i:j:r`.
    pub fn label(&self) -> String {
        let k = self.key;
        format!("{}:{}:{}:{}:{}", k.kind, k.a, k.i, k.j, k.r)
    }
}

/// The brick whose diagonal unit is added by a corruption: a brick of the
/// first column with a right neighbour in its row when there is one, so
/// that the perturbation is not `m`-invariant.
pub fn corruption_brick(pyr: &Pyramid) -> usize {
    pyr.column_bricks(1)
        .find(|&b| pyr.brick_at(pyr.row(b), 2).is_some())
        .unwrap_or(1)
}

/// Resolves the pyramid from `--q` and `--n`.
pub fn pyramid(q: &str, n: Option<usize>) -> Result<Pyramid, CliError> {
    let q = parse_list(q)?;
    let n = n.unwrap_or_else(|| q.iter().copied().max().unwrap_or(0));
    Ok(Pyramid::new(&q, n)?)
}

/// Resolves the shape against the shift matrix.
pub fn shape(arg: &ShapeArg, sigma: &ShiftMatrix) -> Result<Shape, CliError> {
    let nu = match arg {
        ShapeArg::Ones => Shape::ones(sigma.n()),
        ShapeArg::Minimal => sigma.minimal_shape(),
        ShapeArg::Parts(p) => Shape::new(p.clone())?,
    };
    sigma.check_admissible(&nu)?;
    Ok(nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_corruption_and_shape() {
        let c: Corruption = "E:1:1:1:2".parse().unwrap();
        assert_eq!(c.key, GenKey::new(Kind::E, 1, 1, 1, 2));
        assert_eq!(c.label(), "E:1:1:1:2");
        assert!("X:1:1:1:1".parse::<Corruption>().is_err());
        assert!("D:1:1".parse::<Corruption>().is_err());
        assert_eq!("minimal".parse::<ShapeArg>().unwrap(), ShapeArg::Minimal);
        assert_eq!("2,1".parse::<ShapeArg>().unwrap(), ShapeArg::Parts(vec![2, 1]));
        let nu = Shape::new(vec![1, 2]).unwrap();
        let e: Corruption = "E:1:1:2:3".parse().unwrap();
        assert_eq!(e.path_entry(&nu), (1, 3, 1, 3));
        let f: Corruption = "F:1:2:1:3".parse().unwrap();
        assert_eq!(f.path_entry(&nu), (3, 1, 1, 3));
    }

    #[test]
    fn corruption_brick_has_a_right_neighbour() {
        let p = Pyramid::from_heights(&[2, 1]).unwrap();
        let b = corruption_brick(&p);
        assert!(p.brick_at(p.row(b), 2).is_some());
        assert_eq!(corruption_brick(&Pyramid::from_heights(&[3]).unwrap()), 1);
    }
}

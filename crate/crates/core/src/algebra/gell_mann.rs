//! Gell-Mann matrices, read from the bundled data file.

use alloc::boxed::Box;
use alloc::format;

use nalgebra::Matrix3;
use num_complex::Complex64;
use once_cell::race::OnceBox;

use super::{AlgVec, AlgebraTag};
use crate::error::{Error, Result};

pub type CMat3 = Matrix3<Complex64>;

const DATA: &str = include_str!("../../data/gell_mann.txt");

/// Parses the `index row col part num den sqrt3` table format.
pub fn parse_gell_mann(text: &str) -> Result<[CMat3; 8]> {
    let mut out = [CMat3::zeros(); 8];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::InvalidData(format!("gell-mann data line {}: {line}", lineno + 1));
        let f: alloc::vec::Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(bad());
        }
        let idx: usize = f[0].parse().map_err(|_| bad())?;
        let row: usize = f[1].parse().map_err(|_| bad())?;
        let col: usize = f[2].parse().map_err(|_| bad())?;
        let num: i64 = f[4].parse().map_err(|_| bad())?;
        let den: i64 = f[5].parse().map_err(|_| bad())?;
        let sqrt3: u8 = f[6].parse().map_err(|_| bad())?;
        if !(1..=8).contains(&idx) || row > 2 || col > 2 || den == 0 || sqrt3 > 1 {
            return Err(bad());
        }
        let mut value = num as f64 / den as f64;
        if sqrt3 == 1 {
            value *= libm::sqrt(3.0);
        }
        let entry = match f[3] {
            "re" => Complex64::new(value, 0.0),
            "im" => Complex64::new(0.0, value),
            _ => return Err(bad()),
        };
        out[idx - 1][(row, col)] += entry;
    }
    Ok(out)
}

/// `lambda_1, ..., lambda_8` (0-based array).
pub fn gell_mann() -> &'static [CMat3; 8] {
    static CELL: OnceBox<[CMat3; 8]> = OnceBox::new();
    CELL.get_or_init(|| Box::new(parse_gell_mann(DATA).expect("bundled Gell-Mann data is valid")))
}

/// The orthonormal basis `-i lambda_a` of `su(3)`.
pub fn su3_basis() -> &'static [CMat3; 8] {
    static CELL: OnceBox<[CMat3; 8]> = OnceBox::new();
    CELL.get_or_init(|| {
        let l = gell_mann();
        let mi = Complex64::new(0.0, -1.0);
        Box::new(core::array::from_fn(|a| l[a] * mi))
    })
}

/// `-1/2 Re Tr(XY)`.
pub fn trace_inner(x: &CMat3, y: &CMat3) -> f64 {
    -0.5 * (x * y).trace().re
}

pub fn to_su3_matrix(x: &AlgVec) -> Result<CMat3> {
    if x.tag() != AlgebraTag::Su3 {
        return Err(Error::WrongAlgebra {
            expected: AlgebraTag::Su3,
            got: x.tag(),
        });
    }
    let basis = su3_basis();
    let mut m = CMat3::zeros();
    for (c, e) in x.coeffs().iter().zip(basis.iter()) {
        m += e * Complex64::new(*c, 0.0);
    }
    Ok(m)
}

/// Coordinates of a traceless skew-Hermitian matrix; other inputs are
/// projected orthogonally.
pub fn from_su3_matrix(m: &CMat3) -> AlgVec {
    let basis = su3_basis();
    let coeffs = basis.iter().map(|e| trace_inner(m, e)).collect();
    AlgVec::new(AlgebraTag::Su3, coeffs).expect("eight coefficients")
}

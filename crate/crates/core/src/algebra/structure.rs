//! Structure constants, generated once per algebra.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use super::gell_mann::{su3_basis, trace_inner};
use super::AlgebraTag;

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    tag: AlgebraTag,
    dim: usize,
    c: Vec<f64>,
}

impl StructureTable {
    pub fn get(tag: AlgebraTag) -> &'static StructureTable {
        static SP1: OnceBox<StructureTable> = OnceBox::new();
        static PAIR: OnceBox<StructureTable> = OnceBox::new();
        static DOUBLE: OnceBox<StructureTable> = OnceBox::new();
        static SU3: OnceBox<StructureTable> = OnceBox::new();
        let cell = match tag {
            AlgebraTag::Sp1 => &SP1,
            AlgebraTag::Sp1PlusSp1 => &PAIR,
            AlgebraTag::DoubleSp1PlusSp1 => &DOUBLE,
            AlgebraTag::Su3 => &SU3,
        };
        cell.get_or_init(|| Box::new(Self::build(tag)))
    }

    fn build(tag: AlgebraTag) -> Self {
        let dim = tag.dim();
        let mut c = vec![0.0; dim * dim * dim];
        match tag {
            AlgebraTag::Su3 => {
                let e = su3_basis();
                for i in 0..dim {
                    for j in 0..dim {
                        let comm = e[i] * e[j] - e[j] * e[i];
                        for k in 0..dim {
                            c[(i * dim + j) * dim + k] = trace_inner(&comm, &e[k]);
                        }
                    }
                }
            }
            _ => {
                // Orthogonal sum of copies of sp(1), where [e_a, e_b] = 2 eps_abc e_c.
                for block in 0..dim / 3 {
                    let o = 3 * block;
                    for (a, b, s) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                        c[((o + a) * dim + o + b) * dim + o + s] = 2.0;
                        c[((o + b) * dim + o + a) * dim + o + s] = -2.0;
                    }
                }
            }
        }
        StructureTable { tag, dim, c }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                let row = &self.c[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, c) in out.iter_mut().zip(row) {
                    *o += xy * c;
                }
            }
        }
        out
    }

    /// Largest `|c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest component of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += self.c(i, j, l) * self.c(l, k, m)
                                + self.c(j, k, l) * self.c(l, i, m)
                                + self.c(k, i, l) * self.c(l, j, m);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

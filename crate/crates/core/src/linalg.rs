//! Small dense helpers on fixed-size arrays. Everything here works in
//! coordinates that are orthonormal for the metric under consideration.

use libm::sqrt;

pub const DIM: usize = 5;
pub type Vec5 = [f64; DIM];

pub fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        s += a[i] * b[i];
    }
    s
}

pub fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    sqrt(dot(a, a))
}

pub fn axpy<const N: usize>(alpha: f64, x: &[f64; N], y: &[f64; N]) -> [f64; N] {
    core::array::from_fn(|i| alpha * x[i] + y[i])
}

pub fn scale<const N: usize>(a: &[f64; N], s: f64) -> [f64; N] {
    core::array::from_fn(|i| a[i] * s)
}

pub fn sub<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    core::array::from_fn(|i| a[i] - b[i])
}

pub fn add<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    core::array::from_fn(|i| a[i] + b[i])
}

pub fn basis<const N: usize>(k: usize) -> [f64; N] {
    core::array::from_fn(|i| if i == k { 1.0 } else { 0.0 })
}

/// Removes the components along the (orthonormal) `frame` vectors.
pub fn reject<const N: usize>(x: &[f64; N], frame: &[[f64; N]]) -> [f64; N] {
    let mut r = *x;
    for e in frame {
        let c = dot(&r, e);
        r = axpy(-c, e, &r);
    }
    // second pass keeps the result orthogonal to working precision
    for e in frame {
        let c = dot(&r, e);
        r = axpy(-c, e, &r);
    }
    r
}

/// Orthonormal pair spanning `span{a, b}`, or `None` if degenerate
/// (Gram determinant below `gram_tol`).
pub fn orthonormal_pair<const N: usize>(
    a: &[f64; N],
    b: &[f64; N],
    gram_tol: f64,
) -> Option<([f64; N], [f64; N])> {
    let aa = dot(a, a);
    let bb = dot(b, b);
    let ab = dot(a, b);
    if aa * bb - ab * ab < gram_tol * (aa * bb).max(1e-300) {
        return None;
    }
    let u = scale(a, 1.0 / sqrt(aa));
    let w = reject(b, &[u]);
    let nw = norm(&w);
    if nw == 0.0 {
        return None;
    }
    Some((u, scale(&w, 1.0 / nw)))
}

/// Completes orthonormal `frame` to an orthonormal basis of `R^N`,
/// returning only the added vectors. Candidates are the coordinate axes,
/// picked greedily by largest residual so the result is deterministic.
pub fn complete_basis<const N: usize>(frame: &[[f64; N]]) -> alloc::vec::Vec<[f64; N]> {
    let mut all: alloc::vec::Vec<[f64; N]> = frame.to_vec();
    let mut added = alloc::vec::Vec::new();
    while all.len() < N {
        let mut best = (0usize, -1.0, [0.0; N]);
        for k in 0..N {
            let r = reject(&basis::<N>(k), &all);
            let n = norm(&r);
            if n > best.1 + 1e-12 {
                best = (k, n, r);
            }
        }
        let e = scale(&best.2, 1.0 / best.1);
        all.push(e);
        added.push(e);
    }
    added
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix.
pub fn sym_eigen<const N: usize>(m: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mat = nalgebra::DMatrix::from_fn(N, N, |i, j| 0.5 * (m[i][j] + m[j][i]));
    let eig = nalgebra::SymmetricEigen::new(mat);
    let mut order: [usize; N] = core::array::from_fn(|i| i);
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = core::array::from_fn(|k| eig.eigenvalues[order[k]]);
    let vecs = core::array::from_fn(|k| core::array::from_fn(|i| eig.eigenvectors[(i, order[k])]));
    (vals, vecs)
}

/// Symmetric 2x2 eigenvalues, ascending.
pub fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let tr = 0.5 * (a + d);
    let diff = 0.5 * (a - d);
    let r = sqrt(diff * diff + b * b);
    (tr - r, tr + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_basis_is_orthonormal() {
        let (u, v) = orthonormal_pair(&[1.0, 2.0, 0.0, -1.0, 0.5], &[0.0, 1.0, 1.0, 1.0, 1.0], 1e-12).unwrap();
        let rest = complete_basis(&[u, v]);
        let mut all = alloc::vec![u, v];
        all.extend(rest);
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&all[i], &all[j]) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_pair_detected() {
        assert!(orthonormal_pair(&[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0], 1e-12).is_none());
    }

    #[test]
    fn sym_eigen_sorted() {
        let (vals, vecs) = sym_eigen(&[[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.5]]);
        assert_eq!(vals, [-1.0, 0.5, 2.0]);
        assert!((vecs[0][1].abs() - 1.0).abs() < 1e-15);
    }
}

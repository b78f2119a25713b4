//! Dense exact matrices over the crate scalar field, with the handful of
//! kernels everything else reduces to: row echelon form, left null spaces,
//! solving xA = b, and an incremental row-space for ideal closures.

use crate::scalar::{Field, K};

#[derive(Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<K>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = K;
    fn index(&self, (r, c): (usize, usize)) -> &K {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut K {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn row(&self, r: usize) -> Vec<K> {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                let f = self[(i, k)].clone();
                for j in 0..other.cols {
                    if !other[(k, j)].is_zero() {
                        let add = f.clone() * other[(k, j)].clone();
                        out[(i, j)] += add;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = other[(i, j)].clone();
                out[(i, j)] += v;
            }
        }
        out
    }

    pub fn scale(&self, f: &K) -> Mat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.clone() * f.clone();
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(&(-K::one())))
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Stack vertically: self on top of other.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut out = Mat::zero(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out[(self.rows + i, j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// In-place reduced row echelon form. Returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let mut sel = None;
            for i in r..self.rows {
                if !self[(i, c)].is_zero() {
                    sel = Some(i);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, sel * self.cols + j);
                }
            }
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let sub = f.clone() * self[(r, j)].clone();
                        self[(i, j)] = self[(i, j)].clone() - sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of {x : x * self = 0}, as rows of length self.rows.
    pub fn left_kernel(&self) -> Mat {
        // x * A = 0  <=>  A^T x^T = 0; compute the right kernel of A^T via
        // rref of A^T and read off the free variables.
        let t = self.transpose();
        let mut m = t.clone();
        let pivots = m.rref();
        let n = t.cols; // = self.rows
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Mat::zero(free.len(), n);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = K::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                out[(k, pc)] = -m[(pr, fc)].clone();
            }
        }
        out
    }

    /// Solve x * A = b for a single row vector b; None if inconsistent.
    pub fn solve_left(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.cols);
        // Solve A^T y = b^T.
        let t = self.transpose();
        let mut aug = Mat::zero(t.rows, t.cols + 1);
        for i in 0..t.rows {
            for j in 0..t.cols {
                aug[(i, j)] = t[(i, j)].clone();
            }
            aug[(i, t.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&t.cols) {
            return None; // pivot in augmented column
        }
        let mut x = vec![K::zero(); t.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, t.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(n));
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Incrementally maintained row space in reduced echelon form. The reduce
/// operation doubles as a membership test (zero remainder) and a normal form
/// modulo the space.
#[derive(Clone, Debug)]
pub struct RowSpace {
    pub dim: usize,
    rows: Vec<Vec<K>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<K>] {
        &self.rows
    }

    /// Reduce v against the space, returning the remainder.
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in p..self.dim {
                    if !row[j].is_zero() {
                        let sub = f.clone() * row[j].clone();
                        v[j] = v[j].clone() - sub;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Insert v; returns true if the rank grew.
    pub fn insert(&mut self, v: &[K]) -> bool {
        let mut rem = self.reduce(v);
        let Some(p) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = rem[p].inv();
        for x in rem.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        // Back-substitute into existing rows to keep the form reduced.
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            debug_assert!(rp != p);
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.dim {
                    if !rem[j].is_zero() {
                        let sub = f.clone() * rem[j].clone();
                        row[j] = row[j].clone() - sub;
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.rows.insert(at, rem);
        self.pivots.insert(at, p);
        true
    }
}

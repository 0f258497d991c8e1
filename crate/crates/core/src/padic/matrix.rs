use crate::error::{Error, Result};

use super::number::Padic;

/// Dense matrix over Q_p.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<Padic>,
}

impl PadicMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize, prec: i64) -> Self {
        PadicMatrix { p, rows, cols, data: vec![Padic::zero(p, prec); rows * cols] }
    }

    pub fn identity(p: u64, n: usize, prec: i64) -> Self {
        let mut m = Self::zeros(p, n, n, prec);
        for i in 0..n {
            m.set(i, i, Padic::one(p, prec));
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<Padic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        PadicMatrix { p, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_column(p: u64, col: Vec<Padic>) -> Self {
        let r = col.len();
        PadicMatrix { p, rows: r, cols: 1, data: col }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Padic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Padic> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Padic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Padic>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn min_precision(&self) -> i64 {
        self.data.iter().map(|x| x.precision()).min().unwrap_or(i64::MAX)
    }

    pub fn with_precision(&self, n: i64) -> Self {
        let data = self.data.iter().map(|x| x.with_precision(n)).collect();
        PadicMatrix { data, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        PadicMatrix { p: self.p, rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, o: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let prec = self.min_precision().min(o.min_precision());
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Padic::zero(self.p, prec.max(0) + 64);
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * o.get(k, j);
                }
                data.push(acc);
            }
        }
        PadicMatrix { p: self.p, rows: self.rows, cols: o.cols, data }
    }

    pub fn add(&self, o: &PadicMatrix) -> PadicMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &PadicMatrix) -> PadicMatrix {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &PadicMatrix, f: impl Fn(&Padic, &Padic) -> Padic) -> PadicMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        PadicMatrix { data, ..*self }
    }

    pub fn scale(&self, c: &Padic) -> PadicMatrix {
        let data = self.data.iter().map(|x| x * c).collect();
        PadicMatrix { data, ..*self }
    }

    pub fn neg(&self) -> PadicMatrix {
        let data = self.data.iter().map(|x| x.neg_ref()).collect();
        PadicMatrix { data, ..*self }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PadicMatrix {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        PadicMatrix { p: self.p, rows: rows.len(), cols: cols.len(), data }
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self.get(r, col).is_zero())
            .min_by_key(|&r| (self.get(r, col).ord(), r))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Determinant by elimination, pivoting on minimal valuation then lowest row.
    pub fn det(&self) -> Padic {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Padic::one(self.p, self.min_precision().min(1 << 20));
        }
        let mut a = self.clone();
        let mut det = Padic::one(self.p, self.min_precision());
        for col in 0..n {
            let Some(piv) = a.pivot_row(col, col) else {
                let bound = (col..n).map(|r| a.get(r, col).precision()).min().unwrap_or(0);
                return Padic::zero(self.p, bound + det.ord());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = det.neg_ref();
            }
            let pv = a.get(col, col).clone();
            det = det * &pv;
            let inv = pv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) * &inv;
                for k in col + 1..n {
                    let v = a.get(r, k) - &f * a.get(col, k);
                    a.set(r, k, v);
                }
            }
        }
        det
    }

    /// Solves `self * x = b` by Gaussian elimination, pivoting on minimal
    /// valuation then lowest row index. Precision is tracked entrywise.
    pub fn solve(&self, b: &PadicMatrix) -> Result<PadicMatrix> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, b.rows, "dimension mismatch");
        let n = self.rows;
        let m = b.cols;
        let mut a = self.clone();
        let mut rhs = b.clone();
        for col in 0..n {
            let piv = a.pivot_row(col, col).ok_or_else(|| {
                Error::precision(format!(
                    "matrix is singular modulo {}^{}",
                    self.p,
                    self.min_precision()
                ))
            })?;
            a.swap_rows(piv, col);
            rhs.swap_rows(piv, col);
            let inv = a.get(col, col).inv()?;
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) * &inv;
                for k in col..n {
                    let v = a.get(r, k) - &f * a.get(col, k);
                    a.set(r, k, v);
                }
                for k in 0..m {
                    let v = rhs.get(r, k) - &f * rhs.get(col, k);
                    rhs.set(r, k, v);
                }
            }
        }
        let mut x = PadicMatrix::zeros(self.p, n, m, 0);
        for k in 0..m {
            for i in (0..n).rev() {
                let mut acc = rhs.get(i, k).clone();
                for j in i + 1..n {
                    acc = acc - a.get(i, j) * x.get(j, k);
                }
                x.set(i, k, acc.div(a.get(i, i))?);
            }
        }
        Ok(x)
    }

    pub fn solve_vector(&self, b: &[Padic]) -> Result<Vec<Padic>> {
        Ok(self.solve(&PadicMatrix::from_column(self.p, b.to_vec()))?.column(0))
    }

    pub fn inverse(&self) -> Result<PadicMatrix> {
        let prec = self.min_precision();
        self.solve(&PadicMatrix::identity(self.p, self.rows, prec))
    }

    pub fn mul_vector(&self, v: &[Padic]) -> Vec<Padic> {
        self.mul(&PadicMatrix::from_column(self.p, v.to_vec())).column(0)
    }

    /// Characteristic polynomial `det(tI - A)`, coefficients lowest first, via a
    /// Hessenberg reduction and the division-free Hessenberg recurrence.
    pub fn charpoly(&self) -> Vec<Padic> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let prec = self.min_precision();
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = h.pivot_row(j, j + 1) else { continue };
            h.swap_rows(piv, j + 1);
            h.swap_cols(piv, j + 1);
            let inv = h.get(j + 1, j).inv().expect("nonzero pivot");
            for i in j + 2..n {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let f = h.get(i, j) * &inv;
                for k in 0..n {
                    let v = h.get(i, k) - &f * h.get(j + 1, k);
                    h.set(i, k, v);
                }
                for k in 0..n {
                    let v = h.get(k, j + 1) + &f * h.get(k, i);
                    h.set(k, j + 1, v);
                }
            }
        }
        let one = Padic::one(self.p, prec);
        let mut polys: Vec<Vec<Padic>> = vec![vec![one]];
        for k in 1..=n {
            // (t - h_kk) p_{k-1}
            let prev = &polys[k - 1];
            let mut cur = vec![Padic::zero(self.p, prec); k + 1];
            for (i, c) in prev.iter().enumerate() {
                cur[i + 1] = &cur[i + 1] + c;
                cur[i] = &cur[i] - c * h.get(k - 1, k - 1);
            }
            let mut prod = Padic::one(self.p, prec);
            for i in 1..k {
                prod = prod * h.get(k - i, k - i - 1);
                let coef = h.get(k - i - 1, k - 1) * &prod;
                for (d, c) in polys[k - i - 1].iter().enumerate() {
                    cur[d] = &cur[d] - &coef * c;
                }
            }
            polys.push(cur);
        }
        polys.pop().expect("n + 1 polynomials")
    }
}

/// Solves `a * x = b`.
pub fn solve_linear(a: &PadicMatrix, b: &PadicMatrix) -> Result<PadicMatrix> {
    a.solve(b)
}

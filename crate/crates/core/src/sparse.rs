//! Symmetric sparse matrices stored as full compressed rows.

use std::io::Write;

use faer::Mat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymCsr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymCsr {
    /// Builds from `(i, j, v)` triplets with duplicates summed. Only entries
    /// with `i <= j` need to be given; they are mirrored.
    pub fn from_upper_triplets(n: usize, mut trip: Vec<(usize, usize, f64)>) -> Self {
        let lower: Vec<_> = trip.iter().filter(|t| t.0 != t.1).map(|&(i, j, v)| (j, i, v)).collect();
        trip.extend(lower);
        Self::from_triplets(n, trip)
    }

    /// Builds from full `(i, j, v)` triplets, summing duplicates in input
    /// order so the result is reproducible.
    pub fn from_triplets(n: usize, mut trip: Vec<(usize, usize, f64)>) -> Self {
        trip.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(trip.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in trip {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SymCsr { n, row_ptr, cols, vals }
    }

    pub fn from_dense(a: &Mat<f64>) -> Self {
        let n = a.nrows();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 {
                    trip.push((i, j, a[(i, j)]));
                }
            }
        }
        Self::from_triplets(n, trip)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    pub fn max_row_nnz(&self) -> usize {
        (0..self.n).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).max().unwrap_or(0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d = d.max((v - self.get(j, i)).abs());
            }
        }
        d
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut a = Mat::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[(i, j)] = v;
            }
        }
        a
    }

    /// Principal submatrix on the (ascending) index list `keep`.
    pub fn submatrix(&self, keep: &[usize]) -> SymCsr {
        let mut map = vec![usize::MAX; self.n];
        for (r, &i) in keep.iter().enumerate() {
            map[i] = r;
        }
        let mut trip = Vec::new();
        for (r, &i) in keep.iter().enumerate() {
            for (j, v) in self.row(i) {
                if map[j] != usize::MAX {
                    trip.push((r, map[j], v));
                }
            }
        }
        Self::from_triplets(keep.len(), trip)
    }

    /// Writes the upper triangle: header `n nnz`, then `i j value` lines
    /// with 1-based indices and 17 significant digits.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let upper: Vec<_> = (0..self.n)
            .flat_map(|i| self.row(i).filter(move |&(j, _)| j >= i).map(move |(j, v)| (i, j, v)))
            .collect();
        writeln!(w, "{} {}", self.n, upper.len())?;
        for (i, j, v) in upper {
            writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    /// Parses the format written by [`SymCsr::write_coordinate`].
    pub fn read_coordinate(text: &str) -> Result<SymCsr> {
        let bad = |m: &str| Error::param("matrix", m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_>>()?;
        if h.len() != 2 {
            return Err(bad("header must be `n nnz`"));
        }
        let mut trip = Vec::with_capacity(h[1]);
        for l in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 3 {
                return Err(bad("entry lines must be `i j value`"));
            }
            let i: usize = t[0].parse().map_err(|_| bad("bad row index"))?;
            let j: usize = t[1].parse().map_err(|_| bad("bad column index"))?;
            let v: f64 = t[2].parse().map_err(|_| bad("bad value"))?;
            if i == 0 || j == 0 || i > h[0] || j > h[0] {
                return Err(bad("index out of range"));
            }
            trip.push((i - 1, j - 1, v));
        }
        if trip.len() != h[1] {
            return Err(bad("entry count does not match header"));
        }
        Ok(Self::from_upper_triplets(h[0], trip))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SymCsr {
        SymCsr::from_upper_triplets(3, vec![(0, 0, 2.0), (0, 1, -1.0), (1, 1, 2.0), (1, 2, -1.0), (2, 2, 1.0), (0, 0, 1.0)])
    }

    #[test]
    fn assembly_sums_duplicates_and_mirrors() {
        let a = sample();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 0), -1.0);
        assert_eq!(a.get(2, 0), 0.0);
        assert_eq!(a.max_row_nnz(), 3);
        assert_eq!(a.symmetry_defect(), 0.0);
        assert_eq!(a.matvec(&[1.0, 1.0, 1.0]), vec![2.0, 0.0, 0.0]);
        assert_eq!(a.row_sums(), vec![2.0, 0.0, 0.0]);
    }

    #[test]
    fn coordinate_round_trip() {
        let a = sample();
        let mut buf = Vec::new();
        a.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("3 5\n"));
        assert_eq!(SymCsr::read_coordinate(&text).unwrap(), a);
    }

    #[test]
    fn submatrix_and_dense() {
        let a = sample();
        let s = a.submatrix(&[0, 2]);
        assert_eq!(s.n(), 2);
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(SymCsr::from_dense(&a.to_dense()), a);
    }
}

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{Field, Tensor};

/// `U(x^1, ..., x^m) = sum_i a_i prod_k x^k_{i_k}` on finite sections of `c0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    coefficients: Tensor,
}

impl MultilinearForm {
    pub fn new(coefficients: Tensor) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &Tensor {
        &self.coefficients
    }

    pub fn field(&self) -> Field {
        self.coefficients.field()
    }

    pub fn order(&self) -> usize {
        self.coefficients.order()
    }

    /// Dimension of each argument slot.
    pub fn dims(&self) -> &[usize] {
        self.coefficients.shape()
    }

    fn check_args(&self, args: &[Vec<Complex64>], skip: Option<usize>) -> Result<()> {
        if args.len() != self.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} arguments for a {}-linear form",
                args.len(),
                self.order()
            )));
        }
        for (k, (x, &n)) in args.iter().zip(self.dims()).enumerate() {
            if Some(k) != skip && x.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "argument {} has length {}, slot dimension is {n}",
                    k + 1,
                    x.len()
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, args: &[Vec<Complex64>]) -> Result<Complex64> {
        self.check_args(args, None)?;
        let mut values = self.coefficients.entries().to_vec();
        let mut shape = self.dims().to_vec();
        for k in (0..self.order()).rev() {
            values = contract_axis(&values, &shape, k, &args[k]);
            shape.pop();
        }
        Ok(values[0])
    }

    /// The linear functional left in slot `slot` when every other slot is
    /// fixed to its argument; `args[slot]` is ignored.
    pub fn partial(&self, args: &[Vec<Complex64>], slot: usize) -> Result<Vec<Complex64>> {
        if slot >= self.order() {
            return Err(Error::DimensionMismatch(format!("slot {} out of range", slot + 1)));
        }
        self.check_args(args, Some(slot))?;
        Ok(partial_contraction(self.coefficients.entries(), self.dims(), args, slot))
    }

    /// The coefficient array `U(x^1_{i_1}, ..., x^m_{i_m})` of the form
    /// composed with one vector family per slot.
    pub fn value_array(&self, families: &[VectorFamily]) -> Result<Tensor> {
        if families.len() != self.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} families for a {}-linear form",
                families.len(),
                self.order()
            )));
        }
        let mut values = self.coefficients.entries().to_vec();
        let mut shape = self.dims().to_vec();
        let mut field = self.field();
        for (k, fam) in families.iter().enumerate() {
            if fam.dim() != shape[k] {
                return Err(Error::DimensionMismatch(format!(
                    "family {} has dimension {}, slot dimension is {}",
                    k + 1,
                    fam.dim(),
                    shape[k]
                )));
            }
            if fam.vectors.iter().flatten().any(|z| z.im != 0.0) {
                field = Field::Complex;
            }
            values = mode_product(&values, &shape, k, &fam.vectors);
            shape[k] = fam.len();
        }
        Tensor::new(field, shape, values)
    }
}

/// Contracts `axis` of a row-major array against `x`, removing the axis.
pub(crate) fn contract_axis<T>(values: &[T], shape: &[usize], axis: usize, x: &[T]) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<Output = T>,
{
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![T::default(); outer * inner];
    for o in 0..outer {
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (j, &xj) in x.iter().enumerate().take(n) {
            let src = &values[(o * n + j) * inner..(o * n + j + 1) * inner];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = *d + xj * s;
            }
        }
    }
    out
}

/// Applies `matrix` (rows are the new axis) along `axis`.
pub(crate) fn mode_product<T>(values: &[T], shape: &[usize], axis: usize, matrix: &[Vec<T>]) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<Output = T>,
{
    let n = shape[axis];
    let rows = matrix.len();
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![T::default(); outer * rows * inner];
    for o in 0..outer {
        for (i, row) in matrix.iter().enumerate() {
            let dst = &mut out[(o * rows + i) * inner..(o * rows + i + 1) * inner];
            for (j, &mij) in row.iter().enumerate().take(n) {
                let src = &values[(o * n + j) * inner..(o * n + j + 1) * inner];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = *d + mij * s;
                }
            }
        }
    }
    out
}

pub(crate) fn partial_contraction<T>(values: &[T], shape: &[usize], args: &[Vec<T>], slot: usize) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Mul<Output = T>,
{
    let mut vals = values.to_vec();
    let mut sh = shape.to_vec();
    for k in (slot + 1..shape.len()).rev() {
        vals = contract_axis(&vals, &sh, k, &args[k]);
        sh.pop();
    }
    for x in args.iter().take(slot) {
        vals = contract_axis(&vals, &sh, 0, x);
        sh.remove(0);
    }
    vals
}

/// `N` test vectors of one argument slot.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFamily {
    vectors: Vec<Vec<Complex64>>,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::EmptyFamily);
        };
        let d = first.len();
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch("family vectors must share a positive length".into()));
        }
        if vectors.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidTensor("family entries must be finite".into()));
        }
        Ok(Self { vectors })
    }

    pub fn from_real(vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            vectors
                .into_iter()
                .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// The first `n` unit vectors of `K^d`, padded with zero vectors up to `n`
    /// when `n > d`.
    pub fn basis(d: usize, n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..d).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect(),
        )
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Divides by the weak `l1` norm; fails on an all-zero family.
    pub fn normalized(&self) -> Result<Self> {
        let w = weak_l1_norm(self)?;
        if w == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            vectors: self.vectors.iter().map(|v| v.iter().map(|z| z / w).collect()).collect(),
        })
    }
}

/// Weak `l1` norm of a family in `c0`: `max_j sum_i |x_i(j)|`.
///
/// The supremum of `sum_i |phi(x_i)|` over the unit ball of `l1` is a convex
/// function of `phi`, so it is attained at an extreme point, a unimodular
/// multiple of a coordinate functional.
pub fn weak_l1_norm(fam: &VectorFamily) -> Result<f64> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok((0..fam.dim())
        .map(|j| fam.vectors.iter().map(|v| v[j].norm()).sum::<f64>())
        .fold(0.0, f64::max))
}

//! Dense coefficient tensors and exponent bookkeeping.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar field of a tensor or a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// Dense m-dimensional array of scalars stored in row-major order.
///
/// Real tensors keep their entries as complex numbers with zero imaginary
/// part, so every routine can work on a single representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    field: Field,
    shape: Vec<usize>,
    entries: Vec<Complex64>,
}

impl Tensor {
    pub fn new(field: Field, shape: Vec<usize>, entries: Vec<Complex64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::InvalidTensor("order must be at least 1".into()));
        }
        if shape.contains(&0) {
            return Err(Error::InvalidTensor(format!("zero-length axis in shape {shape:?}")));
        }
        let expected: usize = shape.iter().product();
        if entries.len() != expected {
            return Err(Error::InvalidTensor(format!(
                "shape {shape:?} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidTensor("entries must be finite".into()));
        }
        if field == Field::Real && entries.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidTensor("real tensor with nonzero imaginary part".into()));
        }
        Ok(Self { field, shape, entries })
    }

    pub fn from_real(shape: Vec<usize>, entries: Vec<f64>) -> Result<Self> {
        let entries = entries.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Self::new(Field::Real, shape, entries)
    }

    pub fn zeros(field: Field, shape: Vec<usize>) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(field, shape, vec![Complex64::new(0.0, 0.0); len])
    }

    /// The order-`m` diagonal tensor with `n` ones on the main diagonal.
    pub fn diagonal(field: Field, n: usize, m: usize) -> Result<Self> {
        let mut t = Self::zeros(field, vec![n; m])?;
        let step: usize = (0..m).map(|k| n.pow(k as u32)).sum();
        for i in 0..n {
            t.entries[i * step] = Complex64::new(1.0, 0.0);
        }
        Ok(t)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Real parts of the entries; exact for real tensors.
    pub fn real_entries(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn abs_entries(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn get(&self, index: &[usize]) -> Option<Complex64> {
        if index.len() != self.order() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let flat = index.iter().zip(&self.shape).fold(0, |acc, (i, n)| acc * n + i);
        Some(self.entries[flat])
    }

    /// Multiplies every entry by `c`. A complex factor promotes a real tensor.
    pub fn scaled(&self, c: Complex64) -> Self {
        let field = if c.im != 0.0 { Field::Complex } else { self.field };
        Self {
            field,
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// Row-major strides of the current shape.
    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    /// Reorders the axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let m = self.order();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&a| a >= m || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::DimensionMismatch(format!(
                "{perm:?} is not a permutation of the {m} axes"
            )));
        }
        let old_strides = self.strides();
        let new_shape: Vec<usize> = perm.iter().map(|&a| self.shape[a]).collect();
        let moved_strides: Vec<usize> = perm.iter().map(|&a| old_strides[a]).collect();
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; m];
        let mut offset = 0usize;
        for _ in 0..self.len() {
            out.push(self.entries[offset]);
            // odometer over the new multi-index, last axis fastest
            for k in (0..m).rev() {
                idx[k] += 1;
                offset += moved_strides[k];
                if idx[k] < new_shape[k] {
                    break;
                }
                offset -= moved_strides[k] * new_shape[k];
                idx[k] = 0;
            }
        }
        Ok(Self { field: self.field, shape: new_shape, entries: out })
    }

    /// Same entries viewed with another shape of equal total size.
    pub fn reshaped(&self, shape: Vec<usize>) -> Result<Self> {
        Self::new(self.field, shape, self.entries.clone())
    }

    pub fn to_json(&self) -> TensorFile {
        let entries = self
            .entries
            .iter()
            .map(|z| match self.field {
                Field::Real => FileEntry::Real(z.re),
                Field::Complex => FileEntry::Complex([z.re, z.im]),
            })
            .collect();
        TensorFile { field: self.field, shape: self.shape.clone(), entries }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

/// On-disk tensor document:
/// `{"field":"real"|"complex","shape":[n1,...,nm],"entries":[...]}` with
/// complex entries written as `[re, im]` pairs in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub field: Field,
    pub shape: Vec<usize>,
    pub entries: Vec<FileEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FileEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl TryFrom<TensorFile> for Tensor {
    type Error = Error;

    fn try_from(file: TensorFile) -> Result<Self> {
        let entries = file
            .entries
            .iter()
            .map(|e| match (file.field, *e) {
                (_, FileEntry::Real(x)) => Ok(Complex64::new(x, 0.0)),
                (Field::Complex, FileEntry::Complex([re, im])) => Ok(Complex64::new(re, im)),
                (Field::Real, FileEntry::Complex(_)) => {
                    Err(Error::Parse("real tensor entries must be plain numbers".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Tensor::new(file.field, file.shape, entries)
    }
}

/// Exponents `(p_1, ..., p_m)` of a nested mixed norm, each finite and `>= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector(Vec<f64>);

impl ExponentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch("empty exponent vector".into()));
        }
        for &p in &values {
            check_exponent(p)?;
        }
        Ok(Self(values))
    }

    pub fn uniform(q: f64, m: usize) -> Result<Self> {
        Self::new(vec![q; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reciprocals(&self) -> Vec<f64> {
        self.0.iter().map(|p| 1.0 / p).collect()
    }

    /// Builds the exponent vector whose reciprocals are `recip`.
    pub fn from_reciprocals(recip: &[f64]) -> Result<Self> {
        Self::new(recip.iter().map(|r| 1.0 / r).collect())
    }
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(p: ExponentVector) -> Self {
        p.0
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::InvalidExponent { value: p, reason: "must be finite" });
    }
    if p < 1.0 {
        return Err(Error::InvalidExponent { value: p, reason: "must be at least 1" });
    }
    Ok(())
}

/// Ordered disjoint blocks of axes with one exponent per block, outermost
/// block first. Axes are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
    exponents: Vec<f64>,
}

impl OrderedPartition {
    /// Validates that `blocks` partition `{0, ..., order - 1}`.
    pub fn new(blocks: Vec<Vec<usize>>, exponents: Vec<f64>, order: usize) -> Result<Self> {
        let part = Self::unchecked(blocks, exponents);
        part.validate(order)?;
        for &p in &part.exponents {
            check_exponent(p)?;
        }
        Ok(part)
    }

    pub(crate) fn unchecked(blocks: Vec<Vec<usize>>, exponents: Vec<f64>) -> Self {
        Self { blocks, exponents }
    }

    pub(crate) fn validate(&self, order: usize) -> Result<()> {
        if self.blocks.len() != self.exponents.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} exponents",
                self.blocks.len(),
                self.exponents.len()
            )));
        }
        let mut seen = vec![false; order];
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &axis in block {
                if axis >= order {
                    return Err(Error::InvalidPartition(format!(
                        "axis {} outside a tensor of order {order}",
                        axis + 1
                    )));
                }
                if std::mem::replace(&mut seen[axis], true) {
                    return Err(Error::InvalidPartition(format!("axis {} repeated", axis + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("axis {} not covered", missing + 1)));
        }
        Ok(())
    }

    /// Every axis in its own block, natural order.
    pub fn singletons(exponents: &ExponentVector) -> Self {
        let blocks = (0..exponents.len()).map(|k| vec![k]).collect();
        Self { blocks, exponents: exponents.values().to_vec() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Parses a 1-based block list such as `{2}{1}` or `{1,2}{3}` into
    /// 0-based axis groups.
    pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
        let mut blocks = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Parse(format!("expected `{{` in block list `{text}`")))?;
            let close = open
                .find('}')
                .ok_or_else(|| Error::Parse(format!("unclosed block in `{text}`")))?;
            let block = open[..close]
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&a| a >= 1)
                        .map(|a| a - 1)
                        .ok_or_else(|| Error::Parse(format!("bad axis `{}` in `{text}`", s.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = open[close + 1..].trim_start();
        }
        if blocks.is_empty() {
            return Err(Error::Parse("empty block list".into()));
        }
        Ok(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_entries() {
        assert!(Tensor::from_real(vec![], vec![]).is_err());
        assert!(Tensor::from_real(vec![2, 0], vec![]).is_err());
        assert!(Tensor::from_real(vec![2, 2], vec![1.0; 3]).is_err());
        assert!(Tensor::from_real(vec![1], vec![f64::NAN]).is_err());
        let z = vec![Complex64::new(0.0, 1.0)];
        assert!(Tensor::new(Field::Real, vec![1], z).is_err());
    }

    #[test]
    fn permutation_moves_entries() {
        let t = Tensor::from_real(vec![2, 3], (0..6).map(f64::from).collect()).unwrap();
        let tt = t.permuted(&[1, 0]).unwrap();
        assert_eq!(tt.shape(), &[3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t.get(&[i, j]), tt.get(&[j, i]));
            }
        }
        assert!(t.permuted(&[0, 0]).is_err());
    }

    #[test]
    fn diagonal_tensor() {
        let d = Tensor::diagonal(Field::Real, 3, 3).unwrap();
        assert_eq!(d.get(&[1, 1, 1]).unwrap().re, 1.0);
        assert_eq!(d.get(&[1, 0, 1]).unwrap().re, 0.0);
        assert_eq!(d.abs_entries().iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn json_format() {
        let s = r#"{"field":"complex","shape":[2],"entries":[[1,2],[0,-1]]}"#;
        let t = Tensor::from_json_str(s).unwrap();
        assert_eq!(t.entries()[1], Complex64::new(0.0, -1.0));
        let back = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(Tensor::from_json_str(&back).unwrap(), t);

        let r = r#"{"field":"real","shape":[2,2],"entries":[1,0,0,1]}"#;
        assert_eq!(Tensor::from_json_str(r).unwrap(), Tensor::diagonal(Field::Real, 2, 2).unwrap());
        assert!(Tensor::from_json_str(r#"{"field":"real","shape":[1],"entries":[[1,0]]}"#).is_err());
        assert!(Tensor::from_json_str(r#"{"field":"real","shape":[2],"entries":[1]}"#).is_err());
    }

    #[test]
    fn partitions() {
        assert_eq!(OrderedPartition::parse_blocks("{2}{1}").unwrap(), vec![vec![1], vec![0]]);
        assert_eq!(
            OrderedPartition::parse_blocks(" {1, 2} {3}").unwrap(),
            vec![vec![0, 1], vec![2]]
        );
        assert!(OrderedPartition::parse_blocks("{0}").is_err());
        assert!(OrderedPartition::parse_blocks("{1").is_err());
        assert!(OrderedPartition::new(vec![vec![0], vec![0]], vec![1.0, 1.0], 2).is_err());
        assert!(OrderedPartition::new(vec![vec![0]], vec![1.0], 2).is_err());
        assert!(OrderedPartition::new(vec![vec![0, 1]], vec![0.5], 2).is_err());
        assert!(OrderedPartition::new(vec![vec![1], vec![0]], vec![1.0, 2.0], 2).is_ok());
    }

    #[test]
    fn exponent_vectors() {
        assert!(ExponentVector::new(vec![1.0, 0.99]).is_err());
        assert!(ExponentVector::new(vec![f64::INFINITY]).is_err());
        let p = ExponentVector::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(p.reciprocals(), vec![1.0, 0.5]);
    }
}

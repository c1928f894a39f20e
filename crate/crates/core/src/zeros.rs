//! Zero tables: ingestion, synthetic off-line configurations and the average
//! counting law.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nontrivial zero ρ = a + iα in the upper half of the critical strip. The
/// conjugate partner is implicit: every sum pairs ρ with ρ̄.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    a: f64,
    alpha: f64,
}

impl Zero {
    pub fn new(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidZero(format!("real part {a} outside (0, 1)")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidZero(format!(
                "imaginary part {alpha} must be positive"
            )));
        }
        Ok(Self { a, alpha })
    }

    /// A zero on the critical line.
    pub fn critical(alpha: f64) -> Result<Self> {
        Self::new(0.5, alpha)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroSource {
    File(PathBuf),
    Synthetic,
}

/// Zeros in strictly ascending order of height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    zeros: Vec<Zero>,
    source: ZeroSource,
}

impl ZeroSet {
    pub fn empty() -> Self {
        Self {
            zeros: Vec::new(),
            source: ZeroSource::Synthetic,
        }
    }

    pub fn new(zeros: Vec<Zero>, source: ZeroSource) -> Result<Self> {
        if let Some(w) = zeros.windows(2).find(|w| w[1].alpha <= w[0].alpha) {
            return Err(Error::InvalidZero(format!(
                "heights must be strictly ascending ({} then {})",
                w[0].alpha, w[1].alpha
            )));
        }
        Ok(Self { zeros, source })
    }

    /// Critical-line zeros at the given heights.
    pub fn critical_line(heights: &[f64]) -> Result<Self> {
        let zeros = heights
            .iter()
            .map(|&h| Zero::critical(h))
            .collect::<Result<Vec<_>>>()?;
        Self::new(zeros, ZeroSource::Synthetic)
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn source(&self) -> &ZeroSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn first_alpha(&self) -> Option<f64> {
        self.zeros.first().map(|z| z.alpha)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.alpha).collect()
    }

    pub fn all_critical(&self) -> bool {
        self.zeros.iter().all(|z| z.a == 0.5)
    }

    /// The first `n` zeros (or all of them).
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            zeros: self.zeros.iter().take(n).copied().collect(),
            source: self.source.clone(),
        }
    }

    /// Zeros before `index` and zeros from `index` on.
    pub fn split_at(&self, index: usize) -> (Self, Self) {
        let index = index.min(self.zeros.len());
        let (lo, hi) = self.zeros.split_at(index);
        (
            Self {
                zeros: lo.to_vec(),
                source: self.source.clone(),
            },
            Self {
                zeros: hi.to_vec(),
                source: self.source.clone(),
            },
        )
    }

    /// Maximal runs of consecutive zeros sharing the same real part, as
    /// `(a, first index, last index)`.
    pub fn blocks(&self) -> Vec<(f64, usize, usize)> {
        let mut out: Vec<(f64, usize, usize)> = Vec::new();
        for (i, z) in self.zeros.iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.0 == z.a => last.2 = i,
                _ => out.push((z.a, i, i)),
            }
        }
        out
    }
}

/// Reads a zero table: one imaginary part per non-blank line, `#` starts a
/// comment. At most `limit` zeros are kept; every zero is placed on the
/// critical line.
pub fn load_zeros(path: impl AsRef<Path>, limit: usize) -> Result<ZeroSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut zeros = Vec::new();
    let mut previous: Option<f64> = None;
    for (idx, raw) in text.lines().enumerate() {
        if zeros.len() >= limit {
            break;
        }
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = || Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            text: line.to_string(),
        };
        let value: f64 = line.parse().map_err(|_| parse_err())?;
        if !(value > 0.0) || !value.is_finite() {
            return Err(parse_err());
        }
        if let Some(prev) = previous {
            if value <= prev {
                return Err(Error::Order {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    previous: prev,
                    value,
                });
            }
        }
        previous = Some(value);
        zeros.push(Zero {
            a: 0.5,
            alpha: value,
        });
    }
    Ok(ZeroSet {
        zeros,
        source: ZeroSource::File(path.to_path_buf()),
    })
}

/// Piecewise-constant real parts over consecutive blocks of a base set.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchSpec {
    pub blocks: Vec<(usize, f64)>,
    pub base: ZeroSet,
}

/// Builds the off-line configuration: the first `Σ count` heights of the base
/// set, with block `j` carrying real part `a_j`. Heights are reused unchanged.
pub fn synthesize_stretch(spec: &StretchSpec) -> Result<ZeroSet> {
    let requested: usize = spec.blocks.iter().map(|b| b.0).sum();
    if requested > spec.base.len() {
        return Err(Error::BlockOverflow {
            requested,
            available: spec.base.len(),
        });
    }
    let mut zeros = Vec::with_capacity(requested);
    let mut heights = spec.base.zeros.iter();
    for &(count, a) in &spec.blocks {
        if count == 0 {
            return Err(Error::InvalidZero(
                "stretch blocks must be non-empty".into(),
            ));
        }
        for z in heights.by_ref().take(count) {
            zeros.push(Zero::new(a, z.alpha)?);
        }
    }
    Ok(ZeroSet {
        zeros,
        source: ZeroSource::Synthetic,
    })
}

/// Average number of zeros up to height T: (T/2π)(ln(T/2π) − 1). Returned
/// as-is, including the negative values below T = 2πe.
pub fn average_zero_count(t: f64) -> f64 {
    let u = t / (2.0 * PI);
    u * (u.ln() - 1.0)
}

/// Number of zeros with height ≤ T.
pub fn empirical_zero_count(zs: &ZeroSet, t: f64) -> usize {
    zs.zeros.partition_point(|z| z.alpha <= t)
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn table(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_with_comments_and_limit() {
        let f = table("# heights\n14.134725062\n\n21.022039639 # second\n25.010857580\n");
        let zs = load_zeros(f.path(), 2).unwrap();
        assert_eq!(zs.len(), 2);
        assert_eq!(zs.zeros()[0].a(), 0.5);
        assert!((zs.zeros()[0].alpha() - 14.134725062).abs() < 1e-12);
        assert!(matches!(zs.source(), ZeroSource::File(_)));
    }

    #[test]
    fn empty_file_gives_empty_set() {
        let f = table("");
        assert!(load_zeros(f.path(), 100).unwrap().is_empty());
    }

    #[test]
    fn parse_error_names_line() {
        let f = table("14.1\n\nabc\n");
        match load_zeros(f.path(), 10) {
            Err(Error::Parse { line, text, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(text, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn order_violation() {
        let f = table("21.0\n14.1\n");
        assert!(matches!(
            load_zeros(f.path(), 10),
            Err(Error::Order { line: 2, .. })
        ));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_zeros("/nonexistent/zeros.txt", 10),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn stretch_blocks() {
        let heights: Vec<f64> = (1..=20).map(|k| 10.0 * k as f64).collect();
        let base = ZeroSet::critical_line(&heights).unwrap();
        let all_half = synthesize_stretch(&StretchSpec {
            blocks: vec![(20, 0.5)],
            base: base.clone(),
        })
        .unwrap();
        assert_eq!(all_half.zeros(), base.zeros());

        let s = synthesize_stretch(&StretchSpec {
            blocks: vec![(10, 0.5), (5, 0.7)],
            base: base.clone(),
        })
        .unwrap();
        assert_eq!(s.len(), 15);
        assert!(s.zeros()[..10].iter().all(|z| z.a() == 0.5));
        assert!(s.zeros()[10..15].iter().all(|z| z.a() == 0.7));
        assert_eq!(s.alphas(), heights[..15].to_vec());
        assert_eq!(s.blocks(), vec![(0.5, 0, 9), (0.7, 10, 14)]);

        assert!(synthesize_stretch(&StretchSpec {
            blocks: vec![(5, 1.0)],
            base: base.clone(),
        })
        .is_err());
        assert!(matches!(
            synthesize_stretch(&StretchSpec {
                blocks: vec![(15, 0.5), (6, 0.6)],
                base,
            }),
            Err(Error::BlockOverflow {
                requested: 21,
                available: 20
            })
        ));
    }

    #[test]
    fn average_count_values() {
        assert!((average_zero_count(2.0 * PI) + 1.0).abs() < 1e-14);
        assert!((average_zero_count(100.0) - 28.127).abs() < 1e-3);
        assert!((average_zero_count(1000.0) - 647.741).abs() < 1e-3);
    }

    #[test]
    fn empirical_count_is_inclusive() {
        let zs = ZeroSet::critical_line(&[14.1, 21.0, 25.0]).unwrap();
        assert_eq!(empirical_zero_count(&zs, 10.0), 0);
        assert_eq!(empirical_zero_count(&zs, 21.0), 2);
        assert_eq!(empirical_zero_count(&zs, 1e9), 3);
    }
}

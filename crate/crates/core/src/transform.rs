//! Partial transformations of a finite ground set `{0, .., n-1}`.
//!
//! Composition is left to right: `x (a b) = (x a) b`. A point where a
//! transformation is undefined maps to `None`; `None` absorbs under
//! further application, so undefinedness propagates through products.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("n must be positive")]
    EmptyGroundSet,
    #[error("image has {found} entries but n = {n}")]
    ImageLengthMismatch { n: usize, found: usize },
    #[error("image[{index}] = {value} is out of range for n = {n}")]
    EntryOutOfRange { index: usize, value: usize, n: usize },
    #[error("size mismatch: left operand has n = {left}, right operand has n = {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("join operands are not disjoint: point {point} lies in two domains")]
    OverlappingDomains { point: usize },
    #[error("join needs at least one operand")]
    EmptyJoin,
    #[error("point {point} is out of range for n = {n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("point {point} appears twice")]
    DuplicatePoint { point: usize },
    #[error("a cycle needs at least 1 point")]
    EmptyCycle,
    #[error("a chain needs at least 2 points")]
    ChainTooShort,
}

/// Shape selector for [`PartialTransformation::make_basic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicKind {
    Cycle,
    Chain,
}

/// A partial map `{0, .., n-1} -> {0, .., n-1}`, stored as its image array.
///
/// `image[x] == None` means the map is undefined at `x`. The derived
/// ordering is lexicographic on the image array (`None` sorts first),
/// which is the enumeration and reporting order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTransformation", into = "RawTransformation")]
pub struct PartialTransformation {
    n: usize,
    image: Vec<Option<usize>>,
}

/// Wire form: `{"n": 6, "image": [1, 2, 5, 4, 5, null]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawTransformation {
    n: usize,
    image: Vec<Option<usize>>,
}

impl TryFrom<RawTransformation> for PartialTransformation {
    type Error = TransformError;

    fn try_from(raw: RawTransformation) -> Result<Self, TransformError> {
        PartialTransformation::new(raw.n, raw.image)
    }
}

impl From<PartialTransformation> for RawTransformation {
    fn from(t: PartialTransformation) -> Self {
        RawTransformation { n: t.n, image: t.image }
    }
}

impl PartialTransformation {
    pub fn new(n: usize, image: Vec<Option<usize>>) -> Result<Self, TransformError> {
        if n == 0 {
            return Err(TransformError::EmptyGroundSet);
        }
        if image.len() != n {
            return Err(TransformError::ImageLengthMismatch { n, found: image.len() });
        }
        for (index, entry) in image.iter().enumerate() {
            if let Some(value) = *entry {
                if value >= n {
                    return Err(TransformError::EntryOutOfRange { index, value, n });
                }
            }
        }
        Ok(PartialTransformation { n, image })
    }

    /// The empty map: undefined everywhere. This is the zero of `P(X)`.
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "n must be positive");
        PartialTransformation { n, image: vec![None; n] }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "n must be positive");
        PartialTransformation { n, image: (0..n).map(Some).collect() }
    }

    /// The partial identity defined exactly on `points`.
    pub fn identity_on(points: &[usize], n: usize) -> Result<Self, TransformError> {
        if n == 0 {
            return Err(TransformError::EmptyGroundSet);
        }
        let mut image = vec![None; n];
        for &point in points {
            if point >= n {
                return Err(TransformError::PointOutOfRange { point, n });
            }
            image[point] = Some(point);
        }
        Ok(PartialTransformation { n, image })
    }

    /// Builds the basic cycle `(x0 x1 .. x_{k-1})` or chain `[x0 x1 .. xk]`
    /// on the listed points. A cycle maps each listed point to the next,
    /// wrapping around; a chain does the same without the wrap, so its
    /// last point is outside the domain.
    pub fn make_basic(
        kind: BasicKind,
        points: &[usize],
        n: usize,
    ) -> Result<Self, TransformError> {
        if n == 0 {
            return Err(TransformError::EmptyGroundSet);
        }
        match kind {
            BasicKind::Cycle if points.is_empty() => return Err(TransformError::EmptyCycle),
            BasicKind::Chain if points.len() < 2 => return Err(TransformError::ChainTooShort),
            _ => {}
        }
        let mut image = vec![None; n];
        let mut seen = vec![false; n];
        for &point in points {
            if point >= n {
                return Err(TransformError::PointOutOfRange { point, n });
            }
            if seen[point] {
                return Err(TransformError::DuplicatePoint { point });
            }
            seen[point] = true;
        }
        for window in points.windows(2) {
            image[window[0]] = Some(window[1]);
        }
        if let BasicKind::Cycle = kind {
            image[points[points.len() - 1]] = Some(points[0]);
        }
        Ok(PartialTransformation { n, image })
    }

    pub fn cycle(points: &[usize], n: usize) -> Result<Self, TransformError> {
        Self::make_basic(BasicKind::Cycle, points, n)
    }

    pub fn chain(points: &[usize], n: usize) -> Result<Self, TransformError> {
        Self::make_basic(BasicKind::Chain, points, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self) -> &[Option<usize>] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        assert!(x < self.n, "point {x} out of range for n = {}", self.n);
        self.image[x]
    }

    /// Application with the undefined value passed through: an undefined
    /// input stays undefined.
    pub fn apply_diamond(&self, x: Option<usize>) -> Option<usize> {
        x.and_then(|x| self.apply(x))
    }

    /// Points where the map is defined, ascending.
    pub fn dom(&self) -> impl Iterator<Item = usize> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|_| x))
    }

    pub fn dom_size(&self) -> usize {
        self.image.iter().filter(|y| y.is_some()).count()
    }

    pub fn im(&self) -> BTreeSet<usize> {
        self.image.iter().flatten().copied().collect()
    }

    /// `dom ∪ im`: every point touched by an arc of the map.
    pub fn span(&self) -> BTreeSet<usize> {
        let mut s = self.im();
        s.extend(self.dom());
        s
    }

    pub fn is_full(&self) -> bool {
        self.image.iter().all(|y| y.is_some())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.n];
        for y in self.image.iter().flatten() {
            if seen[*y] {
                return false;
            }
            seen[*y] = true;
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.image.iter().all(|y| y.is_none())
    }

    pub fn is_permutation(&self) -> bool {
        self.is_full() && self.is_injective()
    }

    /// Left-to-right composition: `x (self other) = (x self) other`.
    pub fn compose(&self, other: &Self) -> Result<Self, TransformError> {
        if self.n != other.n {
            return Err(TransformError::SizeMismatch { left: self.n, right: other.n });
        }
        let image = self
            .image
            .iter()
            .map(|&y| other.apply_diamond(y))
            .collect();
        Ok(PartialTransformation { n: self.n, image })
    }

    /// `k`-th compositional power; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.compose(self).expect("same ground set");
        }
        acc
    }

    /// True iff `other` agrees with `self` on all of `self`'s domain,
    /// i.e. `self` is a restriction of `other`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "containment needs a common ground set");
        self.dom().all(|x| self.image[x] == other.image[x])
    }

    /// The restriction of the map to the points where `keep` holds.
    pub fn restrict_dom(&self, keep: impl Fn(usize) -> bool) -> Self {
        let image = self
            .image
            .iter()
            .enumerate()
            .map(|(x, &y)| if keep(x) { y } else { None })
            .collect();
        PartialTransformation { n: self.n, image }
    }

    /// Union of maps with pairwise disjoint domains.
    pub fn join<'a>(
        parts: impl IntoIterator<Item = &'a Self>,
    ) -> Result<Self, TransformError> {
        let mut parts = parts.into_iter();
        let first = parts.next().ok_or(TransformError::EmptyJoin)?;
        let mut joined = first.clone();
        for part in parts {
            if part.n != joined.n {
                return Err(TransformError::SizeMismatch { left: joined.n, right: part.n });
            }
            for x in part.dom() {
                if joined.image[x].is_some() {
                    return Err(TransformError::OverlappingDomains { point: x });
                }
                joined.image[x] = part.image[x];
            }
        }
        Ok(joined)
    }
}

impl std::fmt::Display for PartialTransformation {
    /// Renders the image array, `-` standing for undefined: `[1 2 5 4 5 -]`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (x, y) in self.image.iter().enumerate() {
            if x > 0 {
                write!(f, " ")?;
            }
            match y {
                Some(y) => write!(f, "{y}")?,
                None => write!(f, "-")?,
            }
        }
        write!(f, "]")
    }
}

//! Abstract finite semigroups given by a Cayley table, and the five
//! comparison relations between their elements.
//!
//! All quantifiers run over the table extended by a fresh adjoined
//! identity. The conjugation relation restricts its quantifiers further,
//! to the set of elements that keep nonzero left multiples of `a` away
//! from zero; this is what makes it behave at a zero element, where the
//! unrestricted two-sided relation collapses.

use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;
use thiserror::Error;

use crate::transform::PartialTransformation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("table must have at least one element")]
    EmptyTable,
    #[error("table row {row} has {found} entries but m = {m}")]
    RowLengthMismatch { row: usize, found: usize, m: usize },
    #[error("m = {declared} does not match the {found} table rows")]
    OrderMismatch { declared: usize, found: usize },
    #[error("table entry at row {row}, column {col} is {value}, out of range for m = {m}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, m: usize },
    #[error("not associative: ({a} {b}) {c} = {left} but {a} ({b} {c}) = {right}")]
    NotAssociative { a: usize, b: usize, c: usize, left: usize, right: usize },
    #[error("declared zero {declared} is not absorbing: {declared} * {witness} != {declared}")]
    ZeroNotAbsorbing { declared: usize, witness: usize },
    #[error("zero {declared} is out of range for m = {m}")]
    ZeroOutOfRange { declared: usize, m: usize },
    #[error("generation cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },
    #[error("at least one generator is required")]
    EmptyGenerators,
    #[error("generators live on different ground sets: {left} and {right}")]
    GeneratorSizeMismatch { left: usize, right: usize },
    #[error("relation {kind} is not an equivalence; classes exist for o, pstar, and c only")]
    NotAnEquivalenceKind { kind: RelationKind },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The five comparison relations on a semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// One-sided intertwining: some `g` with `a g = g b`.
    L,
    /// Two-sided intertwining: `a g = g b` and `b h = h a`.
    O,
    /// Product exchange: `a = u v` and `b = v u`.
    P,
    /// Transitive closure of the product exchange.
    PStar,
    /// Two-sided intertwining with both witnesses restricted.
    C,
}

impl std::fmt::Display for RelationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let code = match self {
            RelationKind::L => "l",
            RelationKind::O => "o",
            RelationKind::P => "p",
            RelationKind::PStar => "pstar",
            RelationKind::C => "c",
        };
        f.write_str(code)
    }
}

impl std::str::FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "l" => Ok(RelationKind::L),
            "o" => Ok(RelationKind::O),
            "p" => Ok(RelationKind::P),
            "pstar" => Ok(RelationKind::PStar),
            "c" => Ok(RelationKind::C),
            other => Err(format!("unknown relation {other:?}; expected l, o, p, pstar, or c")),
        }
    }
}

/// A boolean `m x m` relation on semigroup elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    m: usize,
    bits: Vec<bool>,
}

impl RelationMatrix {
    fn filled(m: usize, value: bool) -> Self {
        RelationMatrix { m, bits: vec![value; m * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.m + b]
    }

    fn set(&mut self, a: usize, b: usize, value: bool) {
        self.bits[a * self.m + b] = value;
    }

    pub fn is_equivalence(&self) -> bool {
        let m = self.m;
        (0..m).all(|a| self.contains(a, a))
            && (0..m).all(|a| (0..m).all(|b| self.contains(a, b) == self.contains(b, a)))
            && (0..m).all(|a| {
                (0..m).all(|b| {
                    !self.contains(a, b)
                        || (0..m).all(|c| !self.contains(b, c) || self.contains(a, c))
                })
            })
    }

    pub fn is_subset_of(&self, other: &RelationMatrix) -> bool {
        self.m == other.m
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(mine, theirs)| !mine || *theirs)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.m).all(|a| (0..self.m).all(|b| self.contains(a, b) == (a == b)))
    }
}

/// JSON form of a Cayley table:
/// `{"m": 2, "table": [[1, 1], [1, 1]], "zero": 1}`.
#[derive(Debug, Clone, Deserialize)]
pub struct CayleyTableFile {
    pub m: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub zero: Option<usize>,
}

/// A finite semigroup with a validated multiplication table.
///
/// Construction checks associativity eagerly, detects the zero (the
/// unique absorbing element) and the identity if present, and verifies a
/// declared zero against the detected one.
#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "CayleyTableFile")]
pub struct FiniteSemigroup {
    m: usize,
    table: Vec<usize>,
    zero: Option<usize>,
    identity: Option<usize>,
}

impl TryFrom<CayleyTableFile> for FiniteSemigroup {
    type Error = SemigroupError;

    fn try_from(file: CayleyTableFile) -> Result<Self, SemigroupError> {
        if file.m != file.table.len() {
            return Err(SemigroupError::OrderMismatch {
                declared: file.m,
                found: file.table.len(),
            });
        }
        FiniteSemigroup::new(file.table, file.zero)
    }
}

impl FiniteSemigroup {
    pub fn new(
        rows: Vec<Vec<usize>>,
        declared_zero: Option<usize>,
    ) -> Result<Self, SemigroupError> {
        let m = rows.len();
        if m == 0 {
            return Err(SemigroupError::EmptyTable);
        }
        let mut table = Vec::with_capacity(m * m);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != m {
                return Err(SemigroupError::RowLengthMismatch { row, found: entries.len(), m });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= m {
                    return Err(SemigroupError::EntryOutOfRange { row, col, value, m });
                }
                table.push(value);
            }
        }
        let at = |a: usize, b: usize| table[a * m + b];
        for a in 0..m {
            for b in 0..m {
                let ab = at(a, b);
                for c in 0..m {
                    let left = at(ab, c);
                    let right = at(a, at(b, c));
                    if left != right {
                        return Err(SemigroupError::NotAssociative { a, b, c, left, right });
                    }
                }
            }
        }
        let zero = (0..m).find(|&z| (0..m).all(|x| at(z, x) == z && at(x, z) == z));
        if let Some(declared) = declared_zero {
            if declared >= m {
                return Err(SemigroupError::ZeroOutOfRange { declared, m });
            }
            if zero != Some(declared) {
                let witness = (0..m)
                    .find(|&x| at(declared, x) != declared || at(x, declared) != declared)
                    .expect("a non-absorbing element has a witness");
                return Err(SemigroupError::ZeroNotAbsorbing { declared, witness });
            }
        }
        let identity = (0..m).find(|&e| (0..m).all(|x| at(e, x) == x && at(x, e) == x));
        Ok(FiniteSemigroup { m, table, zero, identity })
    }

    /// Closes a set of transformations under composition, breadth first:
    /// the discovered elements are indexed in discovery order and their
    /// composition table is returned alongside them. Errors once the
    /// closure grows past `cap`.
    pub fn from_generators(
        generators: &[PartialTransformation],
        cap: usize,
    ) -> Result<(Self, Vec<PartialTransformation>), SemigroupError> {
        let first = generators.first().ok_or(SemigroupError::EmptyGenerators)?;
        for g in generators {
            if g.n() != first.n() {
                return Err(SemigroupError::GeneratorSizeMismatch {
                    left: first.n(),
                    right: g.n(),
                });
            }
        }
        fn add(
            t: PartialTransformation,
            elements: &mut Vec<PartialTransformation>,
            index: &mut HashMap<PartialTransformation, usize>,
        ) -> bool {
            if index.contains_key(&t) {
                return false;
            }
            index.insert(t.clone(), elements.len());
            elements.push(t);
            true
        }
        let mut elements: Vec<PartialTransformation> = Vec::new();
        let mut index: HashMap<PartialTransformation, usize> = HashMap::new();
        for g in generators {
            if add(g.clone(), &mut elements, &mut index) && elements.len() > cap {
                return Err(SemigroupError::CapExceeded { cap });
            }
        }
        let mut next = 0;
        while next < elements.len() {
            for g in generators {
                let product = elements[next].compose(g).expect("common ground set");
                if add(product, &mut elements, &mut index) && elements.len() > cap {
                    return Err(SemigroupError::CapExceeded { cap });
                }
            }
            next += 1;
        }
        let m = elements.len();
        let mut table = Vec::with_capacity(m * m);
        for a in &elements {
            for b in &elements {
                let product = a.compose(b).expect("common ground set");
                table.push(index[&product]);
            }
        }
        let at = |a: usize, b: usize| table[a * m + b];
        let zero = (0..m).find(|&z| (0..m).all(|x| at(z, x) == z && at(x, z) == z));
        let identity = (0..m).find(|&e| (0..m).all(|x| at(e, x) == x && at(x, e) == x));
        Ok((FiniteSemigroup { m, table, zero, identity }, elements))
    }

    /// Parses the plain-text table format: an optional `zero=z` header,
    /// a line holding `m`, then `m` rows of `m` space-separated element
    /// indices. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Self, SemigroupError> {
        let mut declared_zero: Option<usize> = None;
        let mut m: Option<usize> = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if let Some(value) = content.strip_prefix("zero=") {
                if declared_zero.is_some() {
                    return Err(SemigroupError::Parse {
                        line,
                        message: "zero declared twice".into(),
                    });
                }
                declared_zero = Some(value.trim().parse().map_err(|_| SemigroupError::Parse {
                    line,
                    message: format!("invalid zero index {value:?}"),
                })?);
                continue;
            }
            let Some(m) = m.as_ref().copied() else {
                m = Some(content.parse().map_err(|_| SemigroupError::Parse {
                    line,
                    message: format!("expected the order m, found {content:?}"),
                })?);
                continue;
            };
            if rows.len() == m {
                return Err(SemigroupError::Parse {
                    line,
                    message: format!("unexpected content after {m} table rows"),
                });
            }
            let row = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| SemigroupError::Parse {
                        line,
                        message: format!("invalid table entry {tok:?}"),
                    })
                })
                .collect::<Result<Vec<usize>, _>>()?;
            rows.push(row);
        }
        let m = m.ok_or(SemigroupError::Parse {
            line: text.lines().count() + 1,
            message: "missing the order m".into(),
        })?;
        if rows.len() != m {
            return Err(SemigroupError::Parse {
                line: text.lines().count() + 1,
                message: format!("expected {m} table rows, found {}", rows.len()),
            });
        }
        Self::new(rows, declared_zero)
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        assert!(a < self.m && b < self.m);
        self.table[a * self.m + b]
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    /// Index of the fresh identity adjoined for quantification.
    fn one(&self) -> usize {
        self.m
    }

    /// Product in the table extended by the adjoined identity: indices
    /// run over `0..=m`, with `m` acting as the identity.
    fn mul1(&self, x: usize, y: usize) -> usize {
        if x == self.m {
            y
        } else if y == self.m {
            x
        } else {
            self.table[x * self.m + y]
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.m).all(|a| (a + 1..self.m).all(|b| self.product(a, b) == self.product(b, a)))
    }

    pub fn is_cancellative(&self) -> bool {
        for c in 0..self.m {
            for a in 0..self.m {
                for b in a + 1..self.m {
                    if self.product(a, c) == self.product(b, c)
                        || self.product(c, a) == self.product(c, b)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The set of elements `g` keeping every nonzero left multiple of `a`
    /// away from zero. Without a zero this is all of the semigroup; the
    /// zero itself gets exactly `{zero}`. The definition is applied
    /// literally even in the degenerate case where `a` is its own only
    /// nonzero left multiple: the test then reduces to `a g != zero`.
    pub fn p_set(&self, a: usize) -> BTreeSet<usize> {
        assert!(a < self.m);
        let Some(z) = self.zero else {
            return (0..self.m).collect();
        };
        if a == z {
            return BTreeSet::from([z]);
        }
        let mut multiples: BTreeSet<usize> = (0..=self.m).map(|u| self.mul1(u, a)).collect();
        multiples.remove(&z);
        (0..self.m)
            .filter(|&g| multiples.iter().all(|&x| self.product(x, g) != z))
            .collect()
    }

    /// `p_set` extended by the adjoined identity, as quantifier domain.
    fn p1_set(&self, a: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.p_set(a).into_iter().collect();
        out.push(self.one());
        out
    }

    /// First intertwining pair for a conjugate pair `(a, b)`: `g` in the
    /// restricted set of `a` with `a g = g b`, and `h` in the restricted
    /// set of `b` with `b h = h a`. Indices may be the adjoined identity.
    pub fn conjugating_elements(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let g = self
            .p1_set(a)
            .into_iter()
            .find(|&g| self.mul1(a, g) == self.mul1(g, b))?;
        let h = self
            .p1_set(b)
            .into_iter()
            .find(|&h| self.mul1(b, h) == self.mul1(h, a))?;
        Some((g, h))
    }

    /// Membership test for the restricted quantifier domain, adjoined
    /// identity included.
    pub fn in_p1_set(&self, a: usize, g: usize) -> bool {
        g == self.one() || self.p_set(a).contains(&g)
    }

    pub fn relation(&self, kind: RelationKind) -> RelationMatrix {
        let m = self.m;
        match kind {
            RelationKind::L => {
                let mut rel = RelationMatrix::filled(m, false);
                for a in 0..m {
                    for b in 0..m {
                        let related =
                            (0..=m).any(|g| self.mul1(a, g) == self.mul1(g, b));
                        rel.set(a, b, related);
                    }
                }
                rel
            }
            RelationKind::O => {
                let one_sided = self.relation(RelationKind::L);
                let mut rel = RelationMatrix::filled(m, false);
                for a in 0..m {
                    for b in 0..m {
                        rel.set(a, b, one_sided.contains(a, b) && one_sided.contains(b, a));
                    }
                }
                rel
            }
            RelationKind::P => {
                let mut rel = RelationMatrix::filled(m, false);
                for u in 0..=m {
                    for v in 0..=m {
                        let (uv, vu) = (self.mul1(u, v), self.mul1(v, u));
                        if uv < m && vu < m {
                            rel.set(uv, vu, true);
                        }
                    }
                }
                rel
            }
            RelationKind::PStar => {
                // The product exchange is reflexive and symmetric, so its
                // transitive closure is the component partition.
                let exchange = self.relation(RelationKind::P);
                let mut root: Vec<usize> = (0..m).collect();
                fn find(root: &mut Vec<usize>, mut x: usize) -> usize {
                    while root[x] != x {
                        root[x] = root[root[x]];
                        x = root[x];
                    }
                    x
                }
                for a in 0..m {
                    for b in 0..m {
                        if exchange.contains(a, b) {
                            let (ra, rb) = (find(&mut root, a), find(&mut root, b));
                            root[ra.max(rb)] = ra.min(rb);
                        }
                    }
                }
                let mut rel = RelationMatrix::filled(m, false);
                for a in 0..m {
                    for b in 0..m {
                        rel.set(a, b, find(&mut root, a) == find(&mut root, b));
                    }
                }
                rel
            }
            RelationKind::C => {
                let mut half = RelationMatrix::filled(m, false);
                for a in 0..m {
                    let domain = self.p1_set(a);
                    for b in 0..m {
                        let related =
                            domain.iter().any(|&g| self.mul1(a, g) == self.mul1(g, b));
                        half.set(a, b, related);
                    }
                }
                let mut rel = RelationMatrix::filled(m, false);
                for a in 0..m {
                    for b in 0..m {
                        rel.set(a, b, half.contains(a, b) && half.contains(b, a));
                    }
                }
                rel
            }
        }
    }

    /// Partition of the elements under an equivalence kind, each class
    /// ascending and classes ordered by least element. The one-sided and
    /// product-exchange relations are refused: the former need not be
    /// symmetric and the latter need not be transitive.
    pub fn classes(&self, kind: RelationKind) -> Result<Vec<Vec<usize>>, SemigroupError> {
        if !matches!(kind, RelationKind::O | RelationKind::PStar | RelationKind::C) {
            return Err(SemigroupError::NotAnEquivalenceKind { kind });
        }
        let rel = self.relation(kind);
        debug_assert!(rel.is_equivalence());
        let mut assigned = vec![false; self.m];
        let mut classes = Vec::new();
        for a in 0..self.m {
            if assigned[a] {
                continue;
            }
            let class: Vec<usize> = (a..self.m).filter(|&b| rel.contains(a, b)).collect();
            for &b in &class {
                assigned[b] = true;
            }
            classes.push(class);
        }
        Ok(classes)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let conj = self.relation(RelationKind::C);
        let two_sided = self.relation(RelationKind::O);
        let one_sided = self.relation(RelationKind::L);
        let exchange = self.relation(RelationKind::P);
        let zero_free = self.zero.is_none();
        let mut items = vec![
            AxiomCheck {
                name: "conjugation is an equivalence",
                status: AxiomStatus::from(conj.is_equivalence()),
            },
            AxiomCheck {
                name: "conjugation refines two-sided refines one-sided",
                status: AxiomStatus::from(
                    conj.is_subset_of(&two_sided) && two_sided.is_subset_of(&one_sided),
                ),
            },
            AxiomCheck {
                name: "product exchange implies two-sided",
                status: AxiomStatus::from(exchange.is_subset_of(&two_sided)),
            },
        ];
        items.push(AxiomCheck {
            name: "without a zero, conjugation equals two-sided",
            status: if zero_free {
                AxiomStatus::from(conj == two_sided)
            } else {
                AxiomStatus::Skipped("has a zero")
            },
        });
        items.push(AxiomCheck {
            name: "the zero is conjugate only to itself",
            status: match self.zero {
                Some(z) => AxiomStatus::from(
                    (0..self.m).all(|b| conj.contains(z, b) == (b == z)),
                ),
                None => AxiomStatus::Skipped("no zero"),
            },
        });
        items.push(AxiomCheck {
            name: "trivial conjugation means commutative and cancellative",
            status: if zero_free {
                AxiomStatus::from(
                    conj.is_diagonal() == (self.is_commutative() && self.is_cancellative()),
                )
            } else {
                AxiomStatus::Skipped("has a zero")
            },
        });
        AxiomReport { items }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    Fail,
    Skipped(&'static str),
}

impl From<bool> for AxiomStatus {
    fn from(ok: bool) -> Self {
        if ok {
            AxiomStatus::Pass
        } else {
            AxiomStatus::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub status: AxiomStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub items: Vec<AxiomCheck>,
}

impl AxiomReport {
    /// True when nothing failed; skipped items don't count against it.
    pub fn all_pass(&self) -> bool {
        self.items
            .iter()
            .all(|item| item.status != AxiomStatus::Fail)
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for item in &self.items {
            match item.status {
                AxiomStatus::Pass => writeln!(f, "[pass] {}", item.name)?,
                AxiomStatus::Fail => writeln!(f, "[FAIL] {}", item.name)?,
                AxiomStatus::Skipped(reason) => {
                    writeln!(f, "[skip] {} ({reason})", item.name)?
                }
            }
        }
        Ok(())
    }
}

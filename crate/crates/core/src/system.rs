//! Coxeter systems, generator subsets and the `.cox` text format.
//!
//! A `.cox` file is
//!
//! ```text
//! rank 3
//! labels s t u
//! 1 3 3
//! 3 1 3
//! 3 3 1
//! ```
//!
//! The `labels` line is optional (labels default to `s1 .. sN`), `0` encodes
//! an infinite order, blank lines and `#` comments are ignored. A bare matrix
//! without the `rank` header is accepted as well; the rank is then taken
//! from the first row.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParseError, Result};
use crate::field::Geometry;

/// Order of a product `st`: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// Decodes the file convention: 0 is infinity.
    pub fn from_code(code: u32) -> Order {
        if code == 0 {
            Order::Infinite
        } else {
            Order::Finite(code)
        }
    }

    pub fn code(self) -> u32 {
        match self {
            Order::Finite(m) => m,
            Order::Infinite => 0,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    /// Edge of the Coxeter diagram: every order except 1 and 2.
    pub fn is_edge(self) -> bool {
        !matches!(self, Order::Finite(1) | Order::Finite(2))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of generators `T`, kept as strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Subset {
    members: Vec<usize>,
}

impl Subset {
    pub fn new(members: Vec<usize>, rank: usize) -> Result<Subset> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSubset);
        }
        if let Some(&index) = members.iter().find(|&&i| i >= rank) {
            return Err(Error::IndexOutOfRange { index, rank });
        }
        Ok(Subset { members })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_indices(mut members: Vec<usize>, rank: usize) -> Result<Subset> {
        members.sort_unstable();
        members.dedup();
        Subset::new(members, rank)
    }

    pub fn empty() -> Subset {
        Subset::default()
    }

    pub fn full(rank: usize) -> Subset {
        Subset {
            members: (0..rank).collect(),
        }
    }

    pub(crate) fn from_mask(mask: u64) -> Subset {
        Subset {
            members: (0..64).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    /// `T ∪ {s}`.
    pub fn with(&self, index: usize) -> Subset {
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&index) {
            members.insert(pos, index);
        }
        Subset { members }
    }

    pub(crate) fn check(&self, rank: usize) -> Result<()> {
        match self.members.last() {
            Some(&index) if index >= rank => Err(Error::IndexOutOfRange { index, rank }),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for Subset {
    type Error = Error;

    fn try_from(members: Vec<usize>) -> Result<Subset> {
        Subset::new(members, usize::MAX)
    }
}

impl From<Subset> for Vec<usize> {
    fn from(subset: Subset) -> Vec<usize> {
        subset.members
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A Coxeter system `(W, S)` given by its Coxeter matrix.
///
/// The order of `labels` fixes the generator order used by every ShortLex
/// comparison and every enumeration downstream.
#[derive(Clone)]
pub struct CoxeterSystem {
    orders: Vec<Order>,
    labels: Vec<String>,
    geometry: OnceLock<Arc<Geometry>>,
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders && self.labels == other.labels
    }
}

impl Eq for CoxeterSystem {}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("labels", &self.labels)
            .field("orders", &self.rows())
            .finish()
    }
}

impl CoxeterSystem {
    /// Builds a system from a full matrix of orders, validating every entry.
    #[allow(clippy::needless_range_loop)] // symmetric (i, j) checks read best as indices
    pub fn new(rows: Vec<Vec<Order>>, labels: Option<Vec<String>>) -> Result<CoxeterSystem> {
        let rank = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(ParseError::Malformed {
                    line: i + 1,
                    message: format!("row {i} has {} entries, expected {rank}", row.len()),
                }
                .into());
            }
        }
        for i in 0..rank {
            if rows[i][i] != Order::Finite(1) {
                return Err(ParseError::Diagonal {
                    row: i,
                    value: rows[i][i].code() as u64,
                }
                .into());
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if rows[i][j] != rows[j][i] {
                    return Err(ParseError::Asymmetric {
                        row: i,
                        col: j,
                        value: rows[i][j].code() as u64,
                        mirror: rows[j][i].code() as u64,
                    }
                    .into());
                }
                if let Order::Finite(m) = rows[i][j] {
                    if m < 2 {
                        return Err(ParseError::OffDiagonalTooSmall {
                            row: i,
                            col: j,
                            value: m as u64,
                        }
                        .into());
                    }
                }
            }
        }
        let labels = match labels {
            Some(labels) => {
                if labels.len() != rank {
                    return Err(ParseError::Labels(format!("{} labels given for rank {rank}", labels.len())).into());
                }
                for (k, label) in labels.iter().enumerate() {
                    if labels[..k].contains(label) {
                        return Err(ParseError::Labels(format!("duplicate label {label:?}")).into());
                    }
                }
                labels
            }
            None => default_labels(rank),
        };
        Ok(CoxeterSystem {
            orders: rows.into_iter().flatten().collect(),
            labels,
            geometry: OnceLock::new(),
        })
    }

    /// Convenience constructor from integer rows, `0` meaning infinity.
    pub fn from_rows(rows: &[&[u32]]) -> Result<CoxeterSystem> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| Order::from_code(c)).collect())
            .collect();
        CoxeterSystem::new(rows, None)
    }

    /// Linear diagram `s1 - s2 - ... - sn` with the given edge labels
    /// (`0` meaning infinity); non-adjacent generators commute.
    pub fn path(edges: &[u32]) -> CoxeterSystem {
        let rank = edges.len() + 1;
        let mut rows = vec![vec![Order::Finite(2); rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        for (i, &e) in edges.iter().enumerate() {
            rows[i][i + 1] = Order::from_code(e);
            rows[i + 1][i] = Order::from_code(e);
        }
        CoxeterSystem::new(rows, None).expect("path diagram with valid labels")
    }

    /// The universal Coxeter group of rank `n`: every product has infinite order.
    pub fn universal(rank: usize) -> CoxeterSystem {
        let rows = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { Order::Finite(1) } else { Order::Infinite })
                    .collect()
            })
            .collect();
        CoxeterSystem::new(rows, None).expect("universal system is valid")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.orders[s * self.rank() + t]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<Order>> {
        let n = self.rank();
        (0..n).map(|i| self.orders[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// Restriction to the standard parabolic `W_T`; labels keep their order.
    pub fn induced_subsystem(&self, subset: &Subset) -> Result<CoxeterSystem> {
        subset.check(self.rank())?;
        let m = subset.members();
        let rows = m
            .iter()
            .map(|&i| m.iter().map(|&j| self.order(i, j)).collect())
            .collect();
        let labels = m.iter().map(|&i| self.labels[i].clone()).collect();
        CoxeterSystem::new(rows, Some(labels))
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Parses whitespace-separated generator labels into a word.
    pub fn parse_word(&self, text: &str) -> Result<crate::word::Word> {
        let letters = text
            .split_whitespace()
            .map(|l| self.label_index(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(crate::word::Word::new(letters))
    }

    pub fn format_word(&self, letters: &[usize]) -> String {
        letters
            .iter()
            .map(|&i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Canonical `.cox` rendering; this is what fingerprints hash.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("rank {}\nlabels", self.rank());
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|o| o.code().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Hex SHA-256 of [`CoxeterSystem::canonical_text`].
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// The geometric representation data, built on first use.
    pub fn geometry(&self) -> &Arc<Geometry> {
        self.geometry.get_or_init(|| Arc::new(Geometry::new(self)))
    }

    pub(crate) fn check_generator(&self, s: usize) -> Result<()> {
        if s < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: s,
                rank: self.rank(),
            })
        }
    }
}

fn default_labels(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("s{i}")).collect()
}

/// Parses the `.cox` format described in the module docs.
pub fn parse_coxeter_system(text: &str) -> Result<CoxeterSystem> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut cursor = lines.iter().peekable();

    let mut declared_rank = None;
    if let Some(&&(line, content)) = cursor.peek() {
        let mut tokens = content.split_whitespace();
        if tokens.next() == Some("rank") {
            let value = tokens.next().ok_or(ParseError::Malformed {
                line,
                message: "missing value after `rank`".into(),
            })?;
            let rank: usize = value.parse().map_err(|_| ParseError::Malformed {
                line,
                message: format!("invalid rank {value:?}"),
            })?;
            if tokens.next().is_some() {
                return Err(ParseError::Malformed {
                    line,
                    message: "trailing tokens after rank".into(),
                }
                .into());
            }
            declared_rank = Some(rank);
            cursor.next();
        }
    }

    let mut labels = None;
    if let Some(&&(_, content)) = cursor.peek() {
        let mut tokens = content.split_whitespace();
        if tokens.next() == Some("labels") {
            labels = Some(tokens.map(str::to_string).collect::<Vec<_>>());
            cursor.next();
        }
    }

    let rows_text: Vec<(usize, &str)> = cursor.copied().collect();
    let rank = match declared_rank {
        Some(r) => r,
        None => match rows_text.first() {
            Some((_, first)) => first.split_whitespace().count(),
            None => {
                return Err(ParseError::Malformed {
                    line: 1,
                    message: "empty input".into(),
                }
                .into())
            }
        },
    };
    if rows_text.len() != rank {
        let line = rows_text.last().map_or(lines.last().map_or(1, |l| l.0), |l| l.0);
        return Err(ParseError::Malformed {
            line,
            message: format!("expected {rank} matrix rows, found {}", rows_text.len()),
        }
        .into());
    }

    let mut rows = Vec::with_capacity(rank);
    for (row, &(line, content)) in rows_text.iter().enumerate() {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != rank {
            return Err(ParseError::Malformed {
                line,
                message: format!("row {row} has {} entries, expected {rank}", tokens.len()),
            }
            .into());
        }
        let mut parsed = Vec::with_capacity(rank);
        for (col, token) in tokens.iter().enumerate() {
            let code: u32 = token.parse().map_err(|_| ParseError::BadEntry {
                line,
                row,
                col,
                token: token.to_string(),
            })?;
            parsed.push(Order::from_code(code));
        }
        rows.push(parsed);
    }
    // Diagonal zero would decode to infinity; report it as the raw value.
    CoxeterSystem::new(rows, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rank_one_shorthand() {
        let sys = parse_coxeter_system("1").unwrap();
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.labels(), ["s1"]);
    }

    #[test]
    fn parses_triangle_and_echoes_fields() {
        let text = "rank 3\nlabels a b c\n1 3 3\n3 1 3\n3 3 1\n";
        let sys = parse_coxeter_system(text).unwrap();
        assert_eq!(sys.labels(), ["a", "b", "c"]);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1 } else { 3 };
                assert_eq!(sys.order(i, j), Order::Finite(expect));
            }
        }
        assert_eq!(sys.canonical_text(), text);
    }

    #[test]
    fn zero_decodes_to_infinity() {
        let sys = parse_coxeter_system("rank 2\n1 0\n0 1\n").unwrap();
        assert_eq!(sys.order(0, 1), Order::Infinite);
        assert!(sys.canonical_text().contains("1 0\n0 1"));
    }

    #[test]
    fn distinct_diagnostics() {
        let e = parse_coxeter_system("rank 2\n1 3\n4 1\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse(ParseError::Asymmetric {
                row: 0,
                col: 1,
                value: 3,
                mirror: 4
            })
        ));
        let e = parse_coxeter_system("rank 2\n2 3\n3 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError::Diagonal { row: 0, value: 2 })));
        let e = parse_coxeter_system("rank 2\n1 1\n1 1\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse(ParseError::OffDiagonalTooSmall {
                row: 0,
                col: 1,
                value: 1
            })
        ));
        let e = parse_coxeter_system("rank 2\n1 x\nx 1\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse(ParseError::BadEntry {
                line: 2,
                row: 0,
                col: 1,
                ..
            })
        ));
        let e = parse_coxeter_system("rank 3\n1 3\n3 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError::Malformed { .. })));
        let e = parse_coxeter_system("rank 2\nlabels a a\n1 3\n3 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError::Labels(_))));
    }

    #[test]
    fn induced_subsystems() {
        let tri = CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap();
        assert_eq!(tri.induced_subsystem(&Subset::full(3)).unwrap(), tri);
        let pair = tri.induced_subsystem(&Subset::new(vec![0, 1], 3).unwrap()).unwrap();
        assert_eq!(pair.rank(), 2);
        assert_eq!(pair.order(0, 1), Order::Finite(3));
        assert_eq!(tri.induced_subsystem(&Subset::empty()).unwrap().rank(), 0);
        assert!(Subset::new(vec![0, 3], 3).is_err());
    }

    #[test]
    fn fingerprint_depends_on_content() {
        let a = CoxeterSystem::path(&[3]);
        let b = CoxeterSystem::path(&[4]);
        assert_eq!(a.fingerprint().len(), 64);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Zero-based cell coordinates. Orders row-major (top-to-bottom, then
/// left-to-right), the iteration order of a logical source.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CellAddress {
    pub column: u32,
    pub row: u32,
}

impl CellAddress {
    pub const fn new(column: u32, row: u32) -> Self {
        CellAddress { column, row }
    }

    /// Shifts by a signed offset; `None` when the result leaves the sheet.
    pub fn offset(self, columns: i64, rows: i64) -> Option<CellAddress> {
        let column = u32::try_from(self.column as i64 + columns).ok()?;
        let row = u32::try_from(self.row as i64 + rows).ok()?;
        Some(CellAddress { column, row })
    }
}

impl Ord for CellAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.row, self.column).cmp(&(other.row, other.column))
    }
}

impl PartialOrd for CellAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bijective base-26 column letters: 0 → "A", 25 → "Z", 26 → "AA".
pub fn column_letters(column: u32) -> String {
    let mut n = column as u64 + 1;
    let mut letters = Vec::new();
    while n > 0 {
        n -= 1;
        letters.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    letters.reverse();
    String::from_utf8(letters).expect("ascii")
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", column_letters(self.column), self.row as u64 + 1)
    }
}

/// Parses A1 notation. Letters are case-insensitive.
pub fn parse_a1(text: &str) -> Result<CellAddress> {
    let bad = || Error::Address(text.to_owned());
    let split = text
        .find(|c: char| !c.is_ascii_alphabetic())
        .ok_or_else(bad)?;
    let (letters, digits) = text.split_at(split);
    if letters.is_empty()
        || digits.is_empty()
        || digits.starts_with('0')
        || !digits.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut column: u64 = 0;
    for b in letters.bytes() {
        column = column * 26 + u64::from(b.to_ascii_uppercase() - b'A' + 1);
        if column > u64::from(u32::MAX) {
            return Err(bad());
        }
    }
    let row: u64 = digits.parse().map_err(|_| bad())?;
    if row > u64::from(u32::MAX) {
        return Err(bad());
    }
    Ok(CellAddress {
        column: (column - 1) as u32,
        row: (row - 1) as u32,
    })
}

impl FromStr for CellAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_a1(s)
    }
}

/// Inclusive rectangle of cells with `start` top-left and `end` bottom-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellRange {
    start: CellAddress,
    end: CellAddress,
}

impl CellRange {
    /// Normalizes any two corners into top-left / bottom-right.
    pub fn new(a: CellAddress, b: CellAddress) -> Self {
        CellRange {
            start: CellAddress::new(a.column.min(b.column), a.row.min(b.row)),
            end: CellAddress::new(a.column.max(b.column), a.row.max(b.row)),
        }
    }

    pub fn start(&self) -> CellAddress {
        self.start
    }

    pub fn end(&self) -> CellAddress {
        self.end
    }

    pub fn contains(&self, addr: CellAddress) -> bool {
        (self.start.column..=self.end.column).contains(&addr.column)
            && (self.start.row..=self.end.row).contains(&addr.row)
    }

    pub fn width(&self) -> u64 {
        u64::from(self.end.column - self.start.column) + 1
    }

    pub fn height(&self) -> u64 {
        u64::from(self.end.row - self.start.row) + 1
    }

    /// All coordinates, row-major.
    pub fn addresses(&self) -> impl Iterator<Item = CellAddress> + '_ {
        (self.start.row..=self.end.row).flat_map(move |row| {
            (self.start.column..=self.end.column).map(move |column| CellAddress { column, row })
        })
    }
}

impl fmt::Display for CellRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}", self.start, self.end)
        }
    }
}

/// Parses `A1` or `A1:B2`.
pub fn parse_range(text: &str) -> Result<CellRange> {
    let bad = |_| Error::Range(text.to_owned());
    let mut parts = text.split(':');
    let first = parts.next().unwrap_or_default();
    let second = parts.next();
    if parts.next().is_some() {
        return Err(Error::Range(text.to_owned()));
    }
    let a = parse_a1(first).map_err(bad)?;
    let b = match second {
        Some(s) => parse_a1(s).map_err(bad)?,
        None => a,
    };
    Ok(CellRange::new(a, b))
}

impl FromStr for CellRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_range(s)
    }
}

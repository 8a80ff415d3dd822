use std::collections::BTreeMap;

use super::address::{CellAddress, CellRange};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellType {
    Blank,
    Text,
    Numeric,
    Boolean,
    Formula,
    Error,
}

impl CellType {
    pub fn as_str(self) -> &'static str {
        match self {
            CellType::Blank => "Blank",
            CellType::Text => "Text",
            CellType::Numeric => "Numeric",
            CellType::Boolean => "Boolean",
            CellType::Formula => "Formula",
            CellType::Error => "Error",
        }
    }
}

/// The last computed value a file stores next to a formula.
#[derive(Debug, Clone, PartialEq)]
pub enum CachedValue {
    Text(String),
    Numeric(f64),
    Boolean(bool),
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    Blank,
    Text(String),
    Numeric(f64),
    Boolean(bool),
    /// Error code such as `#DIV/0!`.
    Error(String),
    Formula {
        formula: String,
        cached: Option<CachedValue>,
    },
}

/// Colors are lowercase `#rrggbb`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellStyle {
    pub background_color: Option<String>,
    pub foreground_color: Option<String>,
    pub font_color: Option<String>,
    pub font_name: Option<String>,
    pub font_size: Option<f64>,
}

/// A span of cell text sharing one set of formatting.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RichRun {
    pub text: String,
    pub bold: bool,
    pub italic: bool,
    pub underline: bool,
    pub strike: bool,
    pub font_name: Option<String>,
    pub font_color: Option<String>,
    pub font_size: Option<f64>,
}

impl RichRun {
    pub fn plain(text: impl Into<String>) -> Self {
        RichRun {
            text: text.into(),
            ..Default::default()
        }
    }

    pub fn is_plain(&self) -> bool {
        !self.bold
            && !self.italic
            && !self.underline
            && !self.strike
            && self.font_name.is_none()
            && self.font_color.is_none()
            && self.font_size.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub address: CellAddress,
    pub value: CellValue,
    pub style: CellStyle,
    /// Present only for strings stored as formatted runs.
    pub rich_runs: Option<Vec<RichRun>>,
}

impl Cell {
    pub fn new(address: CellAddress, value: CellValue) -> Self {
        Cell {
            address,
            value,
            style: CellStyle::default(),
            rich_runs: None,
        }
    }

    pub fn with_style(mut self, style: CellStyle) -> Self {
        self.style = style;
        self
    }

    /// Sets the runs and the text value they concatenate to.
    pub fn with_runs(mut self, runs: Vec<RichRun>) -> Self {
        self.value = CellValue::Text(runs.iter().map(|r| r.text.as_str()).collect());
        self.rich_runs = Some(runs);
        self
    }

    pub fn cell_type(&self) -> CellType {
        match self.value {
            CellValue::Blank => CellType::Blank,
            CellValue::Text(_) => CellType::Text,
            CellValue::Numeric(_) => CellType::Numeric,
            CellValue::Boolean(_) => CellType::Boolean,
            CellValue::Error(_) => CellType::Error,
            CellValue::Formula { .. } => CellType::Formula,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self.value, CellValue::Blank)
    }

    // The accessors below see through formulas to their cached result.

    pub fn text_value(&self) -> Option<&str> {
        match &self.value {
            CellValue::Text(s)
            | CellValue::Formula {
                cached: Some(CachedValue::Text(s)),
                ..
            } => Some(s),
            _ => None,
        }
    }

    pub fn numeric_value(&self) -> Option<f64> {
        match &self.value {
            CellValue::Numeric(n)
            | CellValue::Formula {
                cached: Some(CachedValue::Numeric(n)),
                ..
            } => Some(*n),
            _ => None,
        }
    }

    pub fn boolean_value(&self) -> Option<bool> {
        match &self.value {
            CellValue::Boolean(b)
            | CellValue::Formula {
                cached: Some(CachedValue::Boolean(b)),
                ..
            } => Some(*b),
            _ => None,
        }
    }

    pub fn formula_text(&self) -> Option<&str> {
        match &self.value {
            CellValue::Formula { formula, .. } => Some(formula),
            _ => None,
        }
    }

    pub fn error_code(&self) -> Option<&str> {
        match &self.value {
            CellValue::Error(e)
            | CellValue::Formula {
                cached: Some(CachedValue::Error(e)),
                ..
            } => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sheet {
    pub name: String,
    cells: BTreeMap<CellAddress, Cell>,
}

impl Sheet {
    pub fn new(name: impl Into<String>) -> Self {
        Sheet {
            name: name.into(),
            cells: BTreeMap::new(),
        }
    }

    /// Inserts or replaces the cell at `cell.address`.
    pub fn insert(&mut self, cell: Cell) {
        self.cells.insert(cell.address, cell);
    }

    pub fn remove(&mut self, addr: CellAddress) -> Option<Cell> {
        self.cells.remove(&addr)
    }

    pub fn get(&self, addr: CellAddress) -> Option<&Cell> {
        self.cells.get(&addr)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.values()
    }

    /// Cells present inside `range`, row-major.
    pub fn cells_in(&self, range: CellRange) -> impl Iterator<Item = &Cell> + '_ {
        let lo = CellAddress::new(0, range.start().row);
        let hi = CellAddress::new(u32::MAX, range.end().row);
        self.cells
            .range(lo..=hi)
            .map(|(_, c)| c)
            .filter(move |c| range.contains(c.address))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Workbook {
    sheets: Vec<Sheet>,
}

impl Workbook {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an empty sheet, or returns the existing one with that name.
    pub fn sheet_mut(&mut self, name: &str) -> &mut Sheet {
        if let Some(i) = self.sheets.iter().position(|s| s.name == name) {
            return &mut self.sheets[i];
        }
        self.sheets.push(Sheet::new(name));
        self.sheets.last_mut().expect("just pushed")
    }

    pub fn sheets(&self) -> &[Sheet] {
        &self.sheets
    }

    pub fn sheet(&self, name: &str) -> Result<&Sheet> {
        self.sheets
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::SheetNotFound(name.to_owned()))
    }

    /// `Ok(None)` for addresses never written in the file.
    pub fn cell_at(&self, sheet: &str, addr: CellAddress) -> Result<Option<&Cell>> {
        Ok(self.sheet(sheet)?.get(addr))
    }
}

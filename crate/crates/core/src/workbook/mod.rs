//! Workbook model with per-cell metadata, and the .xlsx reader that fills it.

mod address;
mod cell;
mod color;
mod json;
mod richtext;
mod xlsx;

pub use address::{column_letters, parse_a1, parse_range, CellAddress, CellRange};
pub use cell::{CachedValue, Cell, CellStyle, CellType, CellValue, RichRun, Sheet, Workbook};
pub use color::{apply_tint, ColorContext, ColorSpec};
pub use json::cell_to_json;
pub use richtext::render_rich_text;
pub use xlsx::{open_workbook, read_workbook};

impl Workbook {
    /// Reads an .xlsx file. See [`open_workbook`].
    pub fn open(path: impl AsRef<std::path::Path>) -> crate::Result<Self> {
        open_workbook(path)
    }

    pub fn from_bytes(bytes: &[u8]) -> crate::Result<Self> {
        read_workbook(bytes)
    }
}

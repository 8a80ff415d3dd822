//! The three small languages evaluated per cell: references such as
//! `(2,0).valueNumeric`, templates such as `http://example.org/{address}`,
//! and filter expressions such as `/Know\w*/.test(valueString)`.

mod filter;
mod reference;
mod template;
mod value;

pub use filter::{eval_filter, parse_filter, BinaryOp, FilterExpr, FilterRegex};
pub use reference::{eval_ref, parse_ref_expr, RefExpr, Selector, VariableName};
pub use template::{iri_safe_encode, parse_template, Template, TemplatePart};
pub use value::{double_lexical, render_number, ScalarValue};

use crate::workbook::{CellAddress, Workbook};

/// Where an expression is evaluated: a workbook, a sheet and the cell
/// currently being iterated.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub workbook: &'a Workbook,
    pub sheet: &'a str,
    pub current: CellAddress,
}

impl<'a> EvalContext<'a> {
    pub fn new(workbook: &'a Workbook, sheet: &'a str, current: CellAddress) -> Self {
        EvalContext {
            workbook,
            sheet,
            current,
        }
    }
}

use std::fmt;
use std::str::FromStr;

use super::value::{render_number, ScalarValue};
use super::EvalContext;
use crate::error::{Error, Result};
use crate::workbook::{cell_to_json, render_rich_text, CachedValue, Cell, CellAddress, CellValue};

macro_rules! variables {
    ($($variant:ident => $name:literal,)*) => {
        /// The closed catalog of cell variables.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum VariableName {
            $($variant,)*
        }

        impl VariableName {
            pub const ALL: &'static [VariableName] = &[$(VariableName::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(VariableName::$variant => $name,)*
                }
            }
        }

        impl FromStr for VariableName {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(VariableName::$variant),)*
                    _ => Err(Error::UnknownVariable(s.to_owned())),
                }
            }
        }
    };
}

variables! {
    Address => "address",
    Column => "column",
    Row => "row",
    Value => "value",
    ValueString => "valueString",
    ValueNumeric => "valueNumeric",
    ValueInt => "valueInt",
    ValueBoolean => "valueBoolean",
    ValueFormula => "valueFormula",
    ValueError => "valueError",
    ValueRichText => "valueRichText",
    BackgroundColor => "backgroundColor",
    ForegroundColor => "foregroundColor",
    FontColor => "fontColor",
    FontName => "fontName",
    FontSize => "fontSize",
    Json => "json",
}

impl fmt::Display for VariableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which cell a reference reads, relative to the iterated cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    Current,
    /// `(columns, rows)`: positive columns go right, positive rows go down.
    Relative(i64, i64),
    /// `[column, row]`, 0-based, sheet-global.
    Absolute(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RefExpr {
    pub selector: Selector,
    pub variable: VariableName,
}

impl RefExpr {
    pub fn current(variable: VariableName) -> Self {
        RefExpr {
            selector: Selector::Current,
            variable,
        }
    }

    pub fn target(&self, current: CellAddress) -> Option<CellAddress> {
        match self.selector {
            Selector::Current => Some(current),
            Selector::Relative(c, r) => current.offset(c, r),
            Selector::Absolute(c, r) => Some(CellAddress::new(c, r)),
        }
    }
}

impl fmt::Display for RefExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.selector {
            Selector::Current => {}
            Selector::Relative(c, r) => write!(f, "({c},{r}).")?,
            Selector::Absolute(c, r) => write!(f, "[{c},{r}].")?,
        }
        f.write_str(self.variable.as_str())
    }
}

impl FromStr for RefExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ref_expr(s)
    }
}

/// Parses `variable`, `(c,r).variable` or `[c,r].variable`.
pub fn parse_ref_expr(text: &str) -> Result<RefExpr> {
    let bad = |message: &str| Error::RefSyntax {
        text: text.to_owned(),
        message: message.to_owned(),
    };
    let trimmed = text.trim();
    let (open, close) = match trimmed.chars().next() {
        Some('(') => ('(', ')'),
        Some('[') => ('[', ']'),
        Some(_) => return parse_variable(trimmed, text).map(RefExpr::current),
        None => return Err(bad("empty reference")),
    };
    let end = trimmed
        .find(close)
        .ok_or_else(|| bad(&format!("missing '{close}'")))?;
    let inner = &trimmed[open.len_utf8()..end];
    let rest = trimmed[end + 1..]
        .strip_prefix('.')
        .ok_or_else(|| bad("expected '.' after selector"))?;
    let (c, r) = inner
        .split_once(',')
        .ok_or_else(|| bad("selector needs two comma-separated integers"))?;
    let int = |s: &str| -> Result<i64> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(&format!("'{s}' is not an integer")));
        }
        s.parse().map_err(|_| bad(&format!("'{s}' is out of range")))
    };
    let (c, r) = (int(c)?, int(r)?);
    let selector = if open == '(' {
        Selector::Relative(c, r)
    } else {
        let c = u32::try_from(c).map_err(|_| bad("absolute column must be a non-negative index"))?;
        let r = u32::try_from(r).map_err(|_| bad("absolute row must be a non-negative index"))?;
        Selector::Absolute(c, r)
    };
    Ok(RefExpr {
        selector,
        variable: parse_variable(rest, text)?,
    })
}

fn parse_variable(name: &str, whole: &str) -> Result<VariableName> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::RefSyntax {
            text: whole.to_owned(),
            message: format!("'{name}' is not a variable name"),
        });
    }
    name.parse()
}

/// Reads one variable. Missing cells and type mismatches yield `None`.
pub fn eval_ref(r: &RefExpr, ctx: &EvalContext<'_>) -> Result<Option<ScalarValue>> {
    let sheet = ctx.workbook.sheet(ctx.sheet)?;
    let Some(target) = r.target(ctx.current) else {
        return Ok(None);
    };
    Ok(sheet
        .get(target)
        .and_then(|cell| read_variable(cell, r.variable, ctx.sheet)))
}

pub(crate) fn read_variable(cell: &Cell, var: VariableName, sheet: &str) -> Option<ScalarValue> {
    use ScalarValue::*;
    use VariableName as V;
    let text = |s: Option<&str>| s.map(|s| Text(s.to_owned()));
    match var {
        V::Address => Some(Text(cell.address.to_string())),
        V::Column => Some(Integer(i64::from(cell.address.column))),
        V::Row => Some(Integer(i64::from(cell.address.row))),
        V::Value => render_value(cell).map(Text),
        V::ValueString => text(cell.text_value()),
        V::ValueNumeric => cell.numeric_value().map(Number),
        V::ValueInt => cell
            .numeric_value()
            .filter(|n| n.is_finite() && n.abs() < 9.2e18)
            .map(|n| Integer(n.trunc() as i64)),
        V::ValueBoolean => cell.boolean_value().map(Boolean),
        V::ValueFormula => text(cell.formula_text()),
        V::ValueError => text(cell.error_code()),
        V::ValueRichText => render_rich_text(cell).ok().map(Text),
        V::BackgroundColor => text(cell.style.background_color.as_deref()),
        V::ForegroundColor => text(cell.style.foreground_color.as_deref()),
        V::FontColor => text(cell.style.font_color.as_deref()),
        V::FontName => text(cell.style.font_name.as_deref()),
        V::FontSize => cell.style.font_size.map(Number),
        V::Json => Some(Text(cell_to_json(cell, sheet))),
    }
}

/// The type-agnostic string form behind the `value` variable.
fn render_value(cell: &Cell) -> Option<String> {
    let cached = |c: &CachedValue| match c {
        CachedValue::Text(s) | CachedValue::Error(s) => s.clone(),
        CachedValue::Numeric(n) => render_number(*n),
        CachedValue::Boolean(b) => b.to_string(),
    };
    match &cell.value {
        CellValue::Blank => None,
        CellValue::Text(s) | CellValue::Error(s) => Some(s.clone()),
        CellValue::Numeric(n) => Some(render_number(*n)),
        CellValue::Boolean(b) => Some(b.to_string()),
        CellValue::Formula { cached: c, .. } => c.as_ref().map(cached),
    }
}

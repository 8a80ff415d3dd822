use serde::Serialize;

use super::cell::Cell;
use super::richtext::render_rich_text;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CellJson<'a> {
    address: String,
    sheet: &'a str,
    column: u32,
    row: u32,
    cell_type: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_string: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_boolean: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_formula: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_error: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    background_color: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    foreground_color: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    font_color: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    font_name: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    font_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_rich_text: Option<String>,
}

/// One JSON object with a fixed key order; absent values are omitted.
pub fn cell_to_json(cell: &Cell, sheet: &str) -> String {
    let style = &cell.style;
    let doc = CellJson {
        address: cell.address.to_string(),
        sheet,
        column: cell.address.column,
        row: cell.address.row,
        cell_type: cell.cell_type().as_str(),
        value_string: cell.text_value(),
        value_numeric: cell.numeric_value(),
        value_boolean: cell.boolean_value(),
        value_formula: cell.formula_text(),
        value_error: cell.error_code(),
        background_color: style.background_color.as_deref(),
        foreground_color: style.foreground_color.as_deref(),
        font_color: style.font_color.as_deref(),
        font_name: style.font_name.as_deref(),
        font_size: style.font_size,
        value_rich_text: cell
            .rich_runs
            .as_ref()
            .and_then(|_| render_rich_text(cell).ok()),
    };
    serde_json::to_string(&doc).expect("cell json serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbook::{CellAddress, CellStyle, CellValue, RichRun};

    #[test]
    fn blank_cell() {
        let c = Cell::new(CellAddress::new(1, 1), CellValue::Blank);
        assert_eq!(
            cell_to_json(&c, "S"),
            r#"{"address":"B2","sheet":"S","column":1,"row":1,"cellType":"Blank"}"#
        );
    }

    #[test]
    fn numeric_cell_with_style() {
        let c = Cell::new(CellAddress::new(0, 0), CellValue::Numeric(3.5)).with_style(CellStyle {
            background_color: Some("#00ff00".into()),
            font_name: Some("Calibri".into()),
            font_size: Some(11.0),
            ..Default::default()
        });
        assert_eq!(
            cell_to_json(&c, "S"),
            r##"{"address":"A1","sheet":"S","column":0,"row":0,"cellType":"Numeric","valueNumeric":3.5,"backgroundColor":"#00ff00","fontName":"Calibri","fontSize":11.0}"##
        );
    }

    #[test]
    fn text_cell_with_runs() {
        let c = Cell::new(CellAddress::new(0, 0), CellValue::Blank).with_runs(vec![
            RichRun {
                text: "a".into(),
                bold: true,
                ..Default::default()
            },
            RichRun::plain("\"b\""),
        ]);
        let json = cell_to_json(&c, "S");
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["valueString"], "a\"b\"");
        assert_eq!(v["valueRichText"], "<b>a</b>\"b\"");
        assert_eq!(v["cellType"], "Text");
    }
}

use std::fmt::Write;

use super::cell::{Cell, CellType, RichRun};
use crate::error::{Error, Result};

/// Renders a text cell in the HTML-like run syntax, e.g.
/// `<b><i><font face='Arial' color='#ff0000'>text</font></i></b>`.
///
/// Tags nest `b`, `i`, `u`, `s`, then `font`, and only appear for
/// attributes the run actually sets.
pub fn render_rich_text(cell: &Cell) -> Result<String> {
    if cell.cell_type() != CellType::Text {
        return Err(Error::Type(format!(
            "rich text requested for {} cell {}",
            cell.cell_type().as_str(),
            cell.address
        )));
    }
    match &cell.rich_runs {
        Some(runs) => Ok(runs.iter().map(render_run).collect()),
        None => Ok(escape_text(cell.text_value().unwrap_or_default())),
    }
}

pub fn render_run(run: &RichRun) -> String {
    let mut out = String::new();
    let mut closers = Vec::new();
    for (on, tag) in [
        (run.bold, "b"),
        (run.italic, "i"),
        (run.underline, "u"),
        (run.strike, "s"),
    ] {
        if on {
            let _ = write!(out, "<{tag}>");
            closers.push(tag);
        }
    }
    if run.font_name.is_some() || run.font_color.is_some() || run.font_size.is_some() {
        out.push_str("<font");
        if let Some(face) = &run.font_name {
            let _ = write!(out, " face='{}'", escape_attr(face));
        }
        if let Some(color) = &run.font_color {
            let _ = write!(out, " color='{}'", escape_attr(color));
        }
        if let Some(size) = run.font_size {
            let _ = write!(out, " size='{size}'");
        }
        out.push('>');
        closers.push("font");
    }
    out.push_str(&escape_text(&run.text));
    for tag in closers.iter().rev() {
        let _ = write!(out, "</{tag}>");
    }
    out
}

fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_attr(text: &str) -> String {
    escape_text(text).replace('\'', "&#39;")
}

//! SpreadsheetML (.xlsx) reader: workbook and worksheet parts, shared
//! strings (including formatted runs), cell styles and the theme palette.

use std::collections::HashMap;
use std::io::{Cursor, Read, Seek};
use std::path::Path;
use std::sync::OnceLock;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use regex::Regex;
use zip::ZipArchive;

use super::address::{column_letters, parse_a1, parse_range, CellAddress, CellRange};
use super::cell::{CachedValue, Cell, CellStyle, CellValue, RichRun, Sheet, Workbook};
use super::color::{parse_hex_rgb, ColorContext, ColorSpec};
use crate::error::{Error, Result};

const REL_OFFICE_DOCUMENT: &str = "/officeDocument";
const REL_WORKSHEET: &str = "/worksheet";
const REL_SHARED_STRINGS: &str = "/sharedStrings";
const REL_STYLES: &str = "/styles";
const REL_THEME: &str = "/theme";

/// Loads a workbook from disk.
pub fn open_workbook(path: impl AsRef<Path>) -> Result<Workbook> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_workbook(&bytes)
}

/// Loads a workbook from the bytes of an .xlsx file.
pub fn read_workbook(bytes: &[u8]) -> Result<Workbook> {
    let archive = ZipArchive::new(Cursor::new(bytes))
        .map_err(|e| Error::Format(format!("not a zip container ({e})")))?;
    let mut pkg = Package { archive };
    pkg.read()
}

struct Package<R> {
    archive: ZipArchive<R>,
}

#[derive(Debug)]
struct Relationship {
    id: String,
    kind: String,
    target: String,
}

impl<R: Read + Seek> Package<R> {
    fn part(&mut self, name: &str) -> Result<Option<String>> {
        let mut file = match self.archive.by_name(name) {
            Ok(f) => f,
            Err(zip::result::ZipError::FileNotFound) => return Ok(None),
            Err(e) => return Err(Error::Format(format!("{name}: {e}"))),
        };
        let mut text = String::new();
        file.read_to_string(&mut text)
            .map_err(|e| Error::Format(format!("{name}: {e}")))?;
        Ok(Some(text))
    }

    fn required_part(&mut self, name: &str) -> Result<String> {
        self.part(name)?
            .ok_or_else(|| Error::Format(format!("missing part {name}")))
    }

    fn relationships(&mut self, part: &str) -> Result<Vec<Relationship>> {
        let (dir, file) = split_part(part);
        let rels_name = format!("{dir}_rels/{file}.rels");
        match self.part(&rels_name)? {
            Some(xml) => parse_relationships(&xml, dir),
            None => Ok(Vec::new()),
        }
    }

    fn read(&mut self) -> Result<Workbook> {
        let root = self.relationships("")?;
        let workbook_part = root
            .iter()
            .find(|r| r.kind.ends_with(REL_OFFICE_DOCUMENT))
            .map(|r| r.target.clone())
            .unwrap_or_else(|| "xl/workbook.xml".to_owned());
        let workbook_xml = self.required_part(&workbook_part)?;
        let rels = self.relationships(&workbook_part)?;
        let (dir, _) = split_part(&workbook_part);

        let target_of = |suffix: &str, fallback: &str| {
            rels.iter()
                .find(|r| r.kind.ends_with(suffix))
                .map(|r| r.target.clone())
                .unwrap_or_else(|| format!("{dir}{fallback}"))
        };
        let theme = match self.part(&target_of(REL_THEME, "theme/theme1.xml"))? {
            Some(xml) => parse_theme(&xml)?,
            None => Vec::new(),
        };
        let styles = match self.part(&target_of(REL_STYLES, "styles.xml"))? {
            Some(xml) => parse_styles(&xml, theme)?,
            None => Styles::new(ColorContext::new(None, theme)),
        };
        let shared = match self.part(&target_of(REL_SHARED_STRINGS, "sharedStrings.xml"))? {
            Some(xml) => parse_shared_strings(&xml, &styles.colors)?,
            None => Vec::new(),
        };

        let mut workbook = Workbook::new();
        for (name, rel_id) in parse_sheet_list(&workbook_xml)? {
            let Some(rel) = rels.iter().find(|r| r.id == rel_id) else {
                return Err(Error::Format(format!("sheet '{name}' has no relationship {rel_id}")));
            };
            if !rel.kind.ends_with(REL_WORKSHEET) {
                continue; // chartsheets, dialog sheets
            }
            let xml = self.required_part(&rel.target)?;
            let sheet = parse_worksheet(&name, &xml, &shared, &styles)?;
            *workbook.sheet_mut(&name) = sheet;
        }
        Ok(workbook)
    }
}

fn split_part(part: &str) -> (&str, &str) {
    match part.rfind('/') {
        Some(i) => (&part[..=i], &part[i + 1..]),
        None => ("", part),
    }
}

fn resolve_target(dir: &str, target: &str) -> String {
    let joined = match target.strip_prefix('/') {
        Some(abs) => abs.to_owned(),
        None => format!("{dir}{target}"),
    };
    let mut segments: Vec<&str> = Vec::new();
    for seg in joined.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                segments.pop();
            }
            s => segments.push(s),
        }
    }
    segments.join("/")
}

fn xml_error(e: impl std::fmt::Display) -> Error {
    Error::Format(format!("malformed XML: {e}"))
}

fn reader(xml: &str) -> Reader<&[u8]> {
    let mut r = Reader::from_str(xml);
    r.config_mut().trim_text(false);
    r
}

fn attr(e: &BytesStart, local: &str) -> Option<String> {
    e.attributes().flatten().find_map(|a| {
        (a.key.local_name().as_ref() == local.as_bytes())
            .then(|| a.unescape_value().ok().map(|v| v.into_owned()))
            .flatten()
    })
}

/// Attribute `local` carrying a namespace prefix (e.g. `r:id`).
fn prefixed_attr(e: &BytesStart, local: &str) -> Option<String> {
    e.attributes().flatten().find_map(|a| {
        (a.key.prefix().is_some() && a.key.local_name().as_ref() == local.as_bytes())
            .then(|| a.unescape_value().ok().map(|v| v.into_owned()))
            .flatten()
    })
}

/// Reads character data up to the end tag `end`.
fn read_text(r: &mut Reader<&[u8]>, end: &[u8]) -> Result<String> {
    let mut out = String::new();
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Text(t) => out.push_str(&t.unescape().map_err(xml_error)?),
            Event::CData(c) => out.push_str(&String::from_utf8_lossy(&c.into_inner())),
            Event::End(e) if e.local_name().as_ref() == end => return Ok(out),
            Event::Eof => return Err(xml_error("unexpected end of document")),
            _ => {}
        }
    }
}

/// Decodes the `_xHHHH_` escapes OOXML uses for control characters.
fn decode_ooxml_escapes(text: &str) -> String {
    static ESCAPE: OnceLock<Regex> = OnceLock::new();
    let re = ESCAPE.get_or_init(|| Regex::new("_x([0-9A-Fa-f]{4})_").expect("valid regex"));
    if !text.contains("_x") {
        return text.to_owned();
    }
    re.replace_all(text, |caps: &regex::Captures| {
        u32::from_str_radix(&caps[1], 16)
            .ok()
            .and_then(char::from_u32)
            .map(String::from)
            .unwrap_or_else(|| caps[0].to_owned())
    })
    .into_owned()
}

fn parse_relationships(xml: &str, dir: &str) -> Result<Vec<Relationship>> {
    let mut r = reader(xml);
    let mut out = Vec::new();
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Start(e) | Event::Empty(e) if e.local_name().as_ref() == b"Relationship" => {
                if attr(&e, "TargetMode").as_deref() == Some("External") {
                    continue;
                }
                if let (Some(id), Some(kind), Some(target)) =
                    (attr(&e, "Id"), attr(&e, "Type"), attr(&e, "Target"))
                {
                    out.push(Relationship {
                        id,
                        kind,
                        target: resolve_target(dir, &target),
                    });
                }
            }
            Event::Eof => return Ok(out),
            _ => {}
        }
    }
}

fn parse_sheet_list(xml: &str) -> Result<Vec<(String, String)>> {
    let mut r = reader(xml);
    let mut out = Vec::new();
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Start(e) | Event::Empty(e) if e.local_name().as_ref() == b"sheet" => {
                let name = attr(&e, "name").ok_or_else(|| Error::Format("sheet without name".into()))?;
                let id = prefixed_attr(&e, "id")
                    .ok_or_else(|| Error::Format(format!("sheet '{name}' without r:id")))?;
                out.push((name, id));
            }
            Event::Eof => return Ok(out),
            _ => {}
        }
    }
}

const THEME_SLOTS: [&str; 12] = [
    "dk1", "lt1", "dk2", "lt2", "accent1", "accent2", "accent3", "accent4", "accent5", "accent6",
    "hlink", "folHlink",
];

fn parse_theme(xml: &str) -> Result<Vec<Option<u32>>> {
    let mut r = reader(xml);
    let mut colors = vec![None; THEME_SLOTS.len()];
    let mut in_scheme = false;
    let mut slot = None;
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Start(e) | Event::Empty(e) => {
                let name = e.local_name();
                let name = std::str::from_utf8(name.as_ref()).unwrap_or_default();
                if name == "clrScheme" {
                    in_scheme = true;
                } else if in_scheme {
                    if let Some(i) = THEME_SLOTS.iter().position(|s| *s == name) {
                        slot = Some(i);
                    } else if let Some(i) = slot {
                        let value = match name {
                            "srgbClr" => attr(&e, "val"),
                            "sysClr" => attr(&e, "lastClr"),
                            _ => None,
                        };
                        if let Some(rgb) = value.as_deref().and_then(parse_hex_rgb) {
                            colors[i] = Some(rgb);
                        }
                    }
                }
            }
            Event::End(e) => {
                if e.local_name().as_ref() == b"clrScheme" {
                    in_scheme = false;
                }
                if slot.is_some_and(|i| THEME_SLOTS[i].as_bytes() == e.local_name().as_ref()) {
                    slot = None;
                }
            }
            Event::Eof => return Ok(colors),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Default)]
struct FontProps {
    bold: bool,
    italic: bool,
    underline: bool,
    strike: bool,
    name: Option<String>,
    size: Option<f64>,
    color: Option<ColorSpec>,
}

fn flag(e: &BytesStart) -> bool {
    !matches!(attr(e, "val").as_deref(), Some("0" | "false" | "none"))
}

fn color_spec(e: &BytesStart) -> ColorSpec {
    ColorSpec {
        rgb: attr(e, "rgb"),
        indexed: attr(e, "indexed").and_then(|v| v.parse().ok()),
        theme: attr(e, "theme").and_then(|v| v.parse().ok()),
        tint: attr(e, "tint").and_then(|v| v.parse().ok()).unwrap_or(0.0),
        auto: matches!(attr(e, "auto").as_deref(), Some("1" | "true")),
    }
}

/// Applies one child of `<font>` or `<rPr>`; returns false if not a font property.
fn apply_font_prop(props: &mut FontProps, e: &BytesStart) -> bool {
    match e.local_name().as_ref() {
        b"b" => props.bold = flag(e),
        b"i" => props.italic = flag(e),
        b"u" => props.underline = flag(e),
        b"strike" => props.strike = flag(e),
        b"sz" => props.size = attr(e, "val").and_then(|v| v.parse().ok()),
        b"name" | b"rFont" => props.name = attr(e, "val"),
        b"color" => props.color = Some(color_spec(e)),
        _ => return false,
    }
    true
}

#[derive(Debug, Clone, Default)]
struct Fill {
    pattern: Option<String>,
    fg: Option<ColorSpec>,
    bg: Option<ColorSpec>,
}

struct Styles {
    colors: ColorContext,
    /// Resolved style per `cellXfs` index.
    cell_styles: Vec<CellStyle>,
}

impl Styles {
    fn new(colors: ColorContext) -> Self {
        Styles {
            colors,
            cell_styles: Vec::new(),
        }
    }

    fn style(&self, xf: usize) -> CellStyle {
        self.cell_styles.get(xf).cloned().unwrap_or_default()
    }
}

#[derive(PartialEq, Clone, Copy)]
enum StyleSection {
    Other,
    Fonts,
    Fills,
    CellXfs,
    IndexedColors,
}

fn parse_styles(xml: &str, theme: Vec<Option<u32>>) -> Result<Styles> {
    let mut r = reader(xml);
    let mut section = StyleSection::Other;
    let mut fonts: Vec<FontProps> = Vec::new();
    let mut fills: Vec<Fill> = Vec::new();
    let mut xfs: Vec<(usize, usize)> = Vec::new();
    let mut indexed: Vec<u32> = Vec::new();

    loop {
        let event = r.read_event().map_err(xml_error)?;
        let (e, empty) = match &event {
            Event::Start(e) => (e, false),
            Event::Empty(e) => (e, true),
            Event::End(e) => {
                match e.local_name().as_ref() {
                    b"fonts" | b"fills" | b"cellXfs" | b"indexedColors" => {
                        section = StyleSection::Other
                    }
                    _ => {}
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let name = e.local_name();
        match (section, name.as_ref()) {
            (_, b"fonts") if !empty => section = StyleSection::Fonts,
            (_, b"fills") if !empty => section = StyleSection::Fills,
            (_, b"cellXfs") if !empty => section = StyleSection::CellXfs,
            (_, b"indexedColors") if !empty => section = StyleSection::IndexedColors,
            (StyleSection::Fonts, b"font") => fonts.push(FontProps::default()),
            (StyleSection::Fonts, _) => {
                if let Some(font) = fonts.last_mut() {
                    apply_font_prop(font, e);
                }
            }
            (StyleSection::Fills, b"fill") => fills.push(Fill::default()),
            (StyleSection::Fills, b"patternFill") => {
                if let Some(fill) = fills.last_mut() {
                    fill.pattern = Some(attr(e, "patternType").unwrap_or_else(|| "none".into()));
                }
            }
            (StyleSection::Fills, tag @ (b"fgColor" | b"bgColor")) => {
                if let Some(fill) = fills.last_mut() {
                    let spec = Some(color_spec(e));
                    if tag == b"fgColor" {
                        fill.fg = spec;
                    } else {
                        fill.bg = spec;
                    }
                }
            }
            (StyleSection::CellXfs, b"xf") => {
                let id = |k| attr(e, k).and_then(|v| v.parse().ok()).unwrap_or(0);
                xfs.push((id("fontId"), id("fillId")));
            }
            (StyleSection::IndexedColors, b"rgbColor") => {
                if let Some(rgb) = attr(e, "rgb").as_deref().and_then(parse_hex_rgb) {
                    indexed.push(rgb);
                }
            }
            _ => {}
        }
    }

    let colors = ColorContext::new((!indexed.is_empty()).then_some(indexed), theme);
    let cell_styles = xfs
        .iter()
        .map(|&(font_id, fill_id)| {
            let mut style = CellStyle::default();
            if let Some(font) = fonts.get(font_id) {
                style.font_name = font.name.clone();
                style.font_size = font.size;
                style.font_color = font.color.as_ref().and_then(|c| colors.resolve(c));
            }
            if let Some(fill) = fills.get(fill_id) {
                if fill.pattern.as_deref().is_some_and(|p| p != "none") {
                    style.foreground_color = fill.fg.as_ref().and_then(|c| colors.resolve(c));
                    style.background_color = fill.bg.as_ref().and_then(|c| colors.resolve(c));
                }
            }
            style
        })
        .collect();
    Ok(Styles {
        colors,
        cell_styles,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
struct StringItem {
    text: String,
    runs: Option<Vec<RichRun>>,
}

/// Reads the content of `<si>` or `<is>` up to its end tag.
fn read_string_item(r: &mut Reader<&[u8]>, end: &[u8], colors: &ColorContext) -> Result<StringItem> {
    let mut pieces: Vec<(Option<FontProps>, String)> = Vec::new();
    let mut has_runs = false;
    let mut run: Option<(FontProps, String)> = None;
    let mut in_rpr = false;
    let mut in_t = false;
    let mut in_phonetic = 0usize;
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Start(e) => match e.local_name().as_ref() {
                b"r" if in_phonetic == 0 => {
                    has_runs = true;
                    run = Some((FontProps::default(), String::new()));
                }
                b"rPr" => in_rpr = true,
                b"t" => in_t = true,
                b"rPh" | b"phoneticPr" => in_phonetic += 1,
                _ if in_rpr => {
                    if let Some((props, _)) = run.as_mut() {
                        apply_font_prop(props, &e);
                    }
                }
                _ => {}
            },
            Event::Empty(e) => {
                if in_rpr {
                    if let Some((props, _)) = run.as_mut() {
                        apply_font_prop(props, &e);
                    }
                }
            }
            Event::Text(t) if in_t && in_phonetic == 0 => {
                let text = decode_ooxml_escapes(&t.unescape().map_err(xml_error)?);
                match run.as_mut() {
                    Some((_, buf)) => buf.push_str(&text),
                    None => pieces.push((None, text)),
                }
            }
            Event::CData(c) if in_t && in_phonetic == 0 => {
                let text = String::from_utf8_lossy(&c.into_inner()).into_owned();
                match run.as_mut() {
                    Some((_, buf)) => buf.push_str(&text),
                    None => pieces.push((None, text)),
                }
            }
            Event::End(e) => match e.local_name().as_ref() {
                b"t" => in_t = false,
                b"rPr" => in_rpr = false,
                b"rPh" | b"phoneticPr" => in_phonetic = in_phonetic.saturating_sub(1),
                b"r" if in_phonetic == 0 => {
                    if let Some((props, text)) = run.take() {
                        pieces.push((Some(props), text));
                    }
                }
                name if name == end => break,
                _ => {}
            },
            Event::Eof => return Err(xml_error("unterminated string item")),
            _ => {}
        }
    }
    let text: String = pieces.iter().map(|(_, t)| t.as_str()).collect();
    let runs = has_runs.then(|| {
        pieces
            .into_iter()
            .map(|(props, text)| match props {
                None => RichRun::plain(text),
                Some(p) => RichRun {
                    text,
                    bold: p.bold,
                    italic: p.italic,
                    underline: p.underline,
                    strike: p.strike,
                    font_color: p.color.as_ref().and_then(|c| colors.resolve(c)),
                    font_name: p.name,
                    font_size: p.size,
                },
            })
            .collect()
    });
    Ok(StringItem { text, runs })
}

fn parse_shared_strings(xml: &str, colors: &ColorContext) -> Result<Vec<StringItem>> {
    let mut r = reader(xml);
    let mut out = Vec::new();
    loop {
        match r.read_event().map_err(xml_error)? {
            Event::Start(e) if e.local_name().as_ref() == b"si" => {
                out.push(read_string_item(&mut r, b"si", colors)?)
            }
            Event::Empty(e) if e.local_name().as_ref() == b"si" => out.push(StringItem::default()),
            Event::Eof => return Ok(out),
            _ => {}
        }
    }
}

#[derive(Default)]
struct PendingCell {
    address: CellAddress,
    xf: usize,
    kind: Option<String>,
    value: Option<String>,
    formula: Option<String>,
    shared_index: Option<String>,
    shared_master: bool,
    inline: Option<StringItem>,
}

fn parse_worksheet(
    name: &str,
    xml: &str,
    shared: &[StringItem],
    styles: &Styles,
) -> Result<Sheet> {
    let mut r = reader(xml);
    let mut sheet = Sheet::new(name);
    let mut row: Option<u32> = None;
    let mut next_column: u32 = 0;
    let mut pending: Option<PendingCell> = None;
    let mut merges: Vec<CellRange> = Vec::new();
    let mut shared_formulas: HashMap<String, (String, CellAddress)> = HashMap::new();

    loop {
        let event = r.read_event().map_err(xml_error)?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let empty = matches!(event, Event::Empty(_));
                match e.local_name().as_ref() {
                    b"row" => {
                        row = Some(match attr(e, "r").and_then(|v| v.parse::<u32>().ok()) {
                            Some(n) if n > 0 => n - 1,
                            _ => row.map_or(0, |r| r + 1),
                        });
                        next_column = 0;
                    }
                    b"c" => {
                        let address = match attr(e, "r") {
                            Some(a) => parse_a1(&a).map_err(|_| {
                                Error::Format(format!("sheet '{name}': bad cell reference '{a}'"))
                            })?,
                            None => CellAddress::new(next_column, row.unwrap_or(0)),
                        };
                        next_column = address.column + 1;
                        let cell = PendingCell {
                            address,
                            xf: attr(e, "s").and_then(|v| v.parse().ok()).unwrap_or(0),
                            kind: attr(e, "t"),
                            ..Default::default()
                        };
                        if empty {
                            sheet.insert(finish_cell(cell, shared, styles, &shared_formulas)?);
                        } else {
                            pending = Some(cell);
                        }
                    }
                    b"v" if !empty => {
                        let text = read_text(&mut r, b"v")?;
                        if let Some(c) = pending.as_mut() {
                            c.value = Some(text);
                        }
                    }
                    b"f" => {
                        let is_shared = attr(e, "t").as_deref() == Some("shared");
                        let si = attr(e, "si");
                        let text = if empty { String::new() } else { read_text(&mut r, b"f")? };
                        if let Some(c) = pending.as_mut() {
                            if is_shared && !text.is_empty() {
                                if let Some(si) = &si {
                                    shared_formulas.insert(si.clone(), (text.clone(), c.address));
                                }
                                c.shared_master = true;
                            }
                            c.shared_index = if is_shared { si } else { None };
                            c.formula = Some(text);
                        }
                    }
                    b"is" if !empty => {
                        let item = read_string_item(&mut r, b"is", &styles.colors)?;
                        if let Some(c) = pending.as_mut() {
                            c.inline = Some(item);
                        }
                    }
                    b"mergeCell" => {
                        if let Some(range) = attr(e, "ref").and_then(|v| parse_range(&v).ok()) {
                            merges.push(range);
                        }
                    }
                    _ => {}
                }
            }
            Event::End(ref e) if e.local_name().as_ref() == b"c" => {
                if let Some(cell) = pending.take() {
                    sheet.insert(finish_cell(cell, shared, styles, &shared_formulas)?);
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    // merged regions keep only their anchor cell
    for range in merges {
        let covered: Vec<CellAddress> = sheet
            .cells_in(range)
            .map(|c| c.address)
            .filter(|a| *a != range.start())
            .collect();
        for addr in covered {
            sheet.remove(addr);
        }
    }
    Ok(sheet)
}

fn finish_cell(
    cell: PendingCell,
    shared: &[StringItem],
    styles: &Styles,
    shared_formulas: &HashMap<String, (String, CellAddress)>,
) -> Result<Cell> {
    let kind = cell.kind.as_deref().unwrap_or("n");
    let raw = cell.value.filter(|v| !v.is_empty());
    let mut runs = None;
    let cached = match kind {
        "s" => match raw {
            Some(v) => {
                let item = v
                    .trim()
                    .parse::<usize>()
                    .ok()
                    .and_then(|i| shared.get(i))
                    .ok_or_else(|| {
                        Error::Format(format!("cell {}: bad shared string index '{v}'", cell.address))
                    })?;
                runs = item.runs.clone();
                Some(CachedValue::Text(item.text.clone()))
            }
            None => None,
        },
        "inlineStr" => cell.inline.map(|item| {
            runs = item.runs;
            CachedValue::Text(item.text)
        }),
        "str" | "d" => raw.map(|v| CachedValue::Text(decode_ooxml_escapes(&v))),
        "b" => raw.map(|v| CachedValue::Boolean(matches!(v.trim(), "1" | "true"))),
        "e" => raw.map(CachedValue::Error),
        _ => match raw {
            Some(v) => Some(CachedValue::Numeric(v.trim().parse().map_err(|_| {
                Error::Format(format!("cell {}: bad number '{v}'", cell.address))
            })?)),
            None => None,
        },
    };

    let formula = match (cell.formula, &cell.shared_index) {
        (Some(f), Some(si)) if !cell.shared_master && f.is_empty() => match shared_formulas.get(si) {
            Some((master, anchor)) => Some(shift_formula(
                master,
                i64::from(cell.address.column) - i64::from(anchor.column),
                i64::from(cell.address.row) - i64::from(anchor.row),
            )),
            None => Some(f),
        },
        (f, _) => f,
    };

    let value = match (formula, cached) {
        (Some(formula), cached) => {
            runs = None;
            CellValue::Formula { formula, cached }
        }
        (None, None) => CellValue::Blank,
        (None, Some(CachedValue::Text(s))) => CellValue::Text(s),
        (None, Some(CachedValue::Numeric(n))) => CellValue::Numeric(n),
        (None, Some(CachedValue::Boolean(b))) => CellValue::Boolean(b),
        (None, Some(CachedValue::Error(e))) => CellValue::Error(e),
    };
    Ok(Cell {
        address: cell.address,
        value,
        style: styles.style(cell.xf),
        rich_runs: runs,
    })
}

/// Moves the relative A1 references of a shared formula by the offset of a
/// dependent cell from the anchor. `$`-anchored parts stay put.
fn shift_formula(formula: &str, columns: i64, rows: i64) -> String {
    static REF: OnceLock<Regex> = OnceLock::new();
    let re = REF.get_or_init(|| {
        Regex::new(r#""[^"]*"|(\$?)([A-Za-z]{1,3})(\$?)([0-9]+)"#).expect("valid regex")
    });
    let mut out = String::with_capacity(formula.len());
    let mut last = 0;
    for caps in re.captures_iter(formula) {
        let m = caps.get(0).expect("whole match");
        out.push_str(&formula[last..m.start()]);
        last = m.end();
        let Some(letters) = caps.get(2) else {
            out.push_str(m.as_str()); // string literal
            continue;
        };
        let before = formula[..m.start()].chars().next_back();
        let after = formula[m.end()..].chars().next();
        let is_ref = !before.is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '.')
            && !after.is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '(');
        let parsed = parse_a1(&format!("{}{}", letters.as_str(), &caps[4]));
        match (is_ref, parsed) {
            (true, Ok(addr)) => {
                let col_fixed = !caps[1].is_empty();
                let row_fixed = !caps[3].is_empty();
                let column = if col_fixed { i64::from(addr.column) } else { i64::from(addr.column) + columns };
                let row = if row_fixed { i64::from(addr.row) } else { i64::from(addr.row) + rows };
                if column < 0 || row < 0 {
                    out.push_str("#REF!");
                    continue;
                }
                out.push_str(&caps[1]);
                out.push_str(&column_letters(column as u32));
                out.push_str(&caps[3]);
                out.push_str(&(row + 1).to_string());
            }
            _ => out.push_str(m.as_str()),
        }
    }
    out.push_str(&formula[last..]);
    out
}

//! Resolution of SpreadsheetML color references (`rgb`, `indexed`, `theme`
//! plus `tint`) to `#rrggbb`.

/// Legacy 64-entry indexed palette.
const INDEXED: [u32; 64] = [
    0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00, 0xFF00FF, 0x00FFFF, //
    0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00, 0xFF00FF, 0x00FFFF, //
    0x800000, 0x008000, 0x000080, 0x808000, 0x800080, 0x008080, 0xC0C0C0, 0x808080, //
    0x9999FF, 0x993366, 0xFFFFCC, 0xCCFFFF, 0x660066, 0xFF8080, 0x0066CC, 0xCCCCFF, //
    0x000080, 0xFF00FF, 0xFFFF00, 0x00FFFF, 0x800080, 0x800000, 0x008080, 0x0000FF, //
    0x00CCFF, 0xCCFFFF, 0xCCFFCC, 0xFFFF99, 0x99CCFF, 0xFF99CC, 0xCC99FF, 0xFFCC99, //
    0x3366FF, 0x33CCCC, 0x99CC00, 0xFFCC00, 0xFF9900, 0xFF6600, 0x666699, 0x969696, //
    0x003366, 0x339966, 0x003300, 0x333300, 0x993300, 0x993366, 0x333399, 0x333333, //
];

/// A color reference as written in styles or run properties.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColorSpec {
    pub rgb: Option<String>,
    pub indexed: Option<u32>,
    pub theme: Option<u32>,
    pub tint: f64,
    pub auto: bool,
}

/// Palette and theme colors of one workbook.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorContext {
    indexed: Vec<u32>,
    /// Theme colors in `clrScheme` order: dk1, lt1, dk2, lt2, accent1..6,
    /// hlink, folHlink.
    theme: Vec<Option<u32>>,
}

impl Default for ColorContext {
    fn default() -> Self {
        ColorContext {
            indexed: INDEXED.to_vec(),
            theme: Vec::new(),
        }
    }
}

impl ColorContext {
    pub fn new(indexed_override: Option<Vec<u32>>, theme: Vec<Option<u32>>) -> Self {
        ColorContext {
            indexed: indexed_override.unwrap_or_else(|| INDEXED.to_vec()),
            theme,
        }
    }

    /// `None` for automatic, system and otherwise unresolvable colors.
    pub fn resolve(&self, spec: &ColorSpec) -> Option<String> {
        if spec.auto {
            return None;
        }
        let base = if let Some(rgb) = &spec.rgb {
            parse_hex_rgb(rgb)?
        } else if let Some(i) = spec.indexed {
            *self.indexed.get(i as usize)?
        } else {
            let t = spec.theme?;
            // theme indices 0-3 address lt1, dk1, lt2, dk2 in that order
            let slot = match t {
                0 => 1,
                1 => 0,
                2 => 3,
                3 => 2,
                n => n as usize,
            };
            (*self.theme.get(slot)?)?
        };
        Some(to_hex(apply_tint(base, spec.tint)))
    }
}

/// Accepts `AARRGGBB` or `RRGGBB`; alpha is ignored.
pub fn parse_hex_rgb(text: &str) -> Option<u32> {
    let hex = match text.len() {
        8 => &text[2..],
        6 => text,
        _ => return None,
    };
    u32::from_str_radix(hex, 16).ok()
}

pub fn to_hex(rgb: u32) -> String {
    format!("#{:06x}", rgb & 0xFF_FFFF)
}

/// Scales HLS lightness by `tint` in [-1, 1] and rounds each channel.
pub fn apply_tint(rgb: u32, tint: f64) -> u32 {
    if tint == 0.0 || !tint.is_finite() {
        return rgb;
    }
    let tint = tint.clamp(-1.0, 1.0);
    let channel = |shift: u32| f64::from((rgb >> shift) & 0xFF) / 255.0;
    let (h, l, s) = rgb_to_hls(channel(16), channel(8), channel(0));
    let l = if tint < 0.0 {
        l * (1.0 + tint)
    } else {
        l * (1.0 - tint) + tint
    };
    let (r, g, b) = hls_to_rgb(h, l, s);
    let q = |v: f64| (v * 255.0).round().clamp(0.0, 255.0) as u32;
    (q(r) << 16) | (q(g) << 8) | q(b)
}

fn rgb_to_hls(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = (max + min) / 2.0;
    if max == min {
        return (0.0, l, 0.0);
    }
    let d = max - min;
    let s = if l <= 0.5 { d / (max + min) } else { d / (2.0 - max - min) };
    let rc = (max - r) / d;
    let gc = (max - g) / d;
    let bc = (max - b) / d;
    let h = if r == max {
        bc - gc
    } else if g == max {
        2.0 + rc - bc
    } else {
        4.0 + gc - rc
    };
    ((h / 6.0).rem_euclid(1.0), l, s)
}

fn hls_to_rgb(h: f64, l: f64, s: f64) -> (f64, f64, f64) {
    if s == 0.0 {
        return (l, l, l);
    }
    let m2 = if l <= 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let m1 = 2.0 * l - m2;
    (
        hue(m1, m2, h + 1.0 / 3.0),
        hue(m1, m2, h),
        hue(m1, m2, h - 1.0 / 3.0),
    )
}

fn hue(m1: f64, m2: f64, h: f64) -> f64 {
    let h = h.rem_euclid(1.0);
    if h < 1.0 / 6.0 {
        m1 + (m2 - m1) * h * 6.0
    } else if h < 0.5 {
        m2
    } else if h < 2.0 / 3.0 {
        m1 + (m2 - m1) * (2.0 / 3.0 - h) * 6.0
    } else {
        m1
    }
}

//! Tabular reports rendered as CSV (UTF-8, LF, header row) or JSON (rows as
//! an array of objects plus a meta object). Rendering is a pure function of
//! the report contents, so identical runs emit identical bytes.

use serde_json::{json, Map, Value as Json};

/// One cell of a report row.
#[derive(Clone, Debug)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Bool(bool),
    Str(String),
    /// Skipped value (for example when Monte Carlo work is disabled); renders
    /// as an empty CSV field and a JSON null.
    Null,
}

#[derive(Clone, Debug)]
pub struct Meta {
    pub seed: u64,
    pub samples: u64,
    pub version: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Meta,
}

impl Report {
    pub fn new(columns: Vec<&'static str>, meta: Meta) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            meta,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(cell_to_csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert((*name).to_string(), cell_to_json(cell));
                }
                Json::Object(obj)
            })
            .collect();
        let doc = json!({
            "meta": {
                "seed": self.meta.seed,
                "samples": self.meta.samples,
                "version": self.meta.version,
            },
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serialization");
        s.push('\n');
        s
    }
}

fn cell_to_csv(cell: &Cell) -> String {
    match cell {
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => fmt_sig(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Str(v) => v.clone(),
        Cell::Null => String::new(),
    }
}

fn cell_to_json(cell: &Cell) -> Json {
    match cell {
        Cell::UInt(v) => json!(v),
        Cell::Float(v) => {
            if v.is_finite() {
                json!(v)
            } else {
                Json::Null
            }
        }
        Cell::Bool(v) => json!(v),
        Cell::Str(v) => json!(v),
        Cell::Null => Json::Null,
    }
}

/// Formats with 12 significant decimal digits, choosing plain or scientific
/// notation like printf's %g and trimming trailing zeros.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let formatted = format!("{:.11e}", v);
    let (mantissa, exponent) = formatted.split_once('e').expect("exponent format");
    let exp: i32 = exponent.parse().expect("numeric exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let int_len = (exp + 1) as usize;
            if digits.len() <= int_len {
                let mut s = digits.to_string();
                s.push_str(&"0".repeat(int_len - digits.len()));
                s
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        }
    } else {
        let frac = &digits[1..];
        if frac.is_empty() {
            format!("{}e{}", &digits[..1], exp)
        } else {
            format!("{}.{}e{}", &digits[..1], frac, exp)
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

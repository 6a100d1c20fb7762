//! Plain tables rendered as aligned text or CSV, and amounts rendered for
//! JSON. Output never depends on locale: the decimal point is always `.`.

use std::str::FromStr;

use serde_json::{Number, Value};
use tresor_core::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// Two decimals, half-even.
    #[default]
    Rounded,
    /// Exact rationals, `n` or `n/d`.
    Raw,
}

impl Style {
    pub fn amount(self, value: &Money) -> String {
        match self {
            Style::Rounded => value.to_fixed(2),
            Style::Raw => value.to_raw_string(),
        }
    }

    /// A JSON number when rounded, an exact string when raw.
    pub fn json(self, value: &Money) -> Value {
        match self {
            Style::Rounded => Number::from_str(&value.to_fixed(2)).map_or(Value::Null, Value::Number),
            Style::Raw => Value::String(value.to_raw_string()),
        }
    }

    pub fn json_opt(self, value: Option<&Money>) -> Value {
        value.map_or(Value::Null, |v| self.json(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Amount(Money),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&Money> for Cell {
    fn from(m: &Money) -> Self {
        Cell::Amount(m.clone())
    }
}

impl From<Money> for Cell {
    fn from(m: Money) -> Self {
        Cell::Amount(m)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        self.rows.push(cells);
        self
    }

    fn strings(&self, style: Style) -> Vec<Vec<(String, bool)>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Cell::Text(s) => (s.clone(), false),
                        Cell::Amount(m) => (style.amount(m), true),
                        Cell::Empty => (String::new(), true),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_text(&self, style: Style) -> String {
        let body = self.strings(style);
        let columns = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &body {
            for (i, (s, _)) in row.iter().enumerate().take(columns) {
                widths[i] = widths[i].max(s.chars().count());
            }
        }
        let numeric: Vec<bool> = (0..columns)
            .map(|i| !body.is_empty() && body.iter().all(|row| row.get(i).is_none_or(|c| c.1)))
            .collect();
        let line = |cells: Vec<(&str, bool)>| {
            let mut out = String::new();
            for (i, (s, right)) in cells.into_iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                let pad = widths[i] - s.chars().count();
                if right {
                    out.extend(std::iter::repeat_n(' ', pad));
                    out.push_str(s);
                } else {
                    out.push_str(s);
                    out.extend(std::iter::repeat_n(' ', pad));
                }
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
            out
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(
            self.headers.iter().zip(&numeric).map(|(h, n)| (h.as_str(), *n)).collect(),
        ));
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(rule.iter().map(|r| (r.as_str(), false)).collect()));
        for row in &body {
            out.push_str(&line(row.iter().map(|(s, r)| (s.as_str(), *r)).collect()));
        }
        out
    }

    fn write_csv<W: std::io::Write>(&self, writer: &mut csv::Writer<W>, style: Style, section: bool) -> csv::Result<()> {
        let prefix = section.then_some("section");
        writer.write_record(prefix.into_iter().chain(self.headers.iter().map(String::as_str)))?;
        for row in self.strings(style) {
            let prefix = section.then_some(self.title.as_str());
            writer.write_record(prefix.into_iter().chain(row.iter().map(|(s, _)| s.as_str())))?;
        }
        Ok(())
    }
}

pub fn text(tables: &[Table], style: Style) -> String {
    tables
        .iter()
        .map(|t| t.to_text(style))
        .collect::<Vec<_>>()
        .join("\n")
}

/// One table is written as is; several are written one after the other,
/// each with a leading `section` column holding its title.
pub fn csv(tables: &[Table], style: Style) -> String {
    let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let section = tables.len() > 1;
    for table in tables {
        // writing to memory cannot fail
        table.write_csv(&mut writer, style, section).expect("in-memory CSV");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV")).expect("CSV output is UTF-8")
}

//! The code file formats: a line-oriented text format with an explicit
//! header and one matrix row per line, and an equivalent JSON rendering
//! selected by the `.json` extension. Serialization is canonical, so every
//! emitted file re-parses to the identical in-memory value.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use zprcodes::poly::PolyMatrix;
use zprcodes::ring::RingParams;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Block,
    Convolutional,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Block => write!(f, "block"),
            Kind::Convolutional => write!(f, "convolutional"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "generator")]
    Generator,
    #[serde(rename = "p-encoder")]
    PEncoder,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Generator => write!(f, "generator"),
            Role::PEncoder => write!(f, "p-encoder"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(message: impl Into<String>) -> ParseError {
    ParseError { message: message.into() }
}

/// An on-disk matrix over `Z_{p^r}`: ring, kind, matrix role and the
/// coefficient lists of every cell (ascending powers of `D`, trimmed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFile {
    pub p: u64,
    pub r: u32,
    pub kind: Kind,
    pub role: Role,
    pub entries: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct JsonFile {
    version: u32,
    p: u64,
    r: u32,
    kind: Kind,
    role: Role,
    entries: Vec<Vec<Vec<u64>>>,
}

impl CodeFile {
    pub fn new(
        p: u64,
        r: u32,
        kind: Kind,
        role: Role,
        entries: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self, ParseError> {
        let file = CodeFile { p, r, kind, role, entries: trim_entries(entries) };
        file.validate()?;
        Ok(file)
    }

    pub fn ring(&self) -> Result<RingParams, ParseError> {
        RingParams::new(self.p, self.r).map_err(|e| err(format!("invalid ring: {e}")))
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    fn validate(&self) -> Result<(), ParseError> {
        let ring = self.ring()?;
        let cols = self.cols();
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != cols {
                return Err(err(format!(
                    "row {i} has {} cells, expected {cols}",
                    row.len()
                )));
            }
            for (j, cell) in row.iter().enumerate() {
                for &c in cell {
                    if c >= ring.modulus() {
                        return Err(err(format!(
                            "row {i}, cell {j}: entry {c} out of range for Z_{}",
                            ring.modulus()
                        )));
                    }
                }
                if self.kind == Kind::Block && cell.len() > 1 {
                    return Err(err(format!(
                        "row {i}, cell {j}: block codes take single coefficients"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<PolyMatrix, ParseError> {
        let ring = self.ring()?;
        PolyMatrix::from_entries(ring, &self.entries)
            .map_err(|e| err(format!("invalid matrix: {e}")))
    }

    pub fn from_matrix(m: &PolyMatrix, kind: Kind, role: Role) -> Self {
        let entries = m
            .rows()
            .iter()
            .map(|row| {
                (0..m.n())
                    .map(|i| {
                        let mut cell: Vec<u64> =
                            row.coeffs().iter().map(|c| c[i]).collect();
                        while cell.last() == Some(&0) {
                            cell.pop();
                        }
                        cell
                    })
                    .collect()
            })
            .collect();
        CodeFile {
            p: m.ring().p(),
            r: m.ring().r(),
            kind,
            role,
            entries: trim_entries(entries),
        }
    }

    /// Canonical text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("zprcode {FORMAT_VERSION}\n"));
        out.push_str(&format!("p {}\n", self.p));
        out.push_str(&format!("r {}\n", self.r));
        out.push_str(&format!("kind {}\n", self.kind));
        out.push_str(&format!("role {}\n", self.role));
        out.push_str(&format!("rows {}\n", self.rows()));
        out.push_str(&format!("cols {}\n", self.cols()));
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|cell| render_cell(cell)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |name: &str| -> Result<String, ParseError> {
            let line = lines
                .next()
                .ok_or_else(|| err(format!("missing header line '{name}'")))?;
            let (key, value) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| err(format!("malformed header line '{line}'")))?;
            if key != name {
                return Err(err(format!("expected header '{name}', found '{key}'")));
            }
            Ok(value.trim().to_string())
        };
        let version: u32 = header("zprcode")?
            .parse()
            .map_err(|_| err("unreadable format version"))?;
        if version != FORMAT_VERSION {
            return Err(err(format!("unsupported format version {version}")));
        }
        let p: u64 = header("p")?.parse().map_err(|_| err("unreadable p"))?;
        let r: u32 = header("r")?.parse().map_err(|_| err("unreadable r"))?;
        let kind = match header("kind")?.as_str() {
            "block" => Kind::Block,
            "convolutional" => Kind::Convolutional,
            other => return Err(err(format!("unknown kind '{other}'"))),
        };
        let role = match header("role")?.as_str() {
            "generator" => Role::Generator,
            "p-encoder" => Role::PEncoder,
            other => return Err(err(format!("unknown role '{other}'"))),
        };
        let rows: usize = header("rows")?.parse().map_err(|_| err("unreadable row count"))?;
        let cols: usize = header("cols")?.parse().map_err(|_| err("unreadable column count"))?;
        let mut entries = Vec::with_capacity(rows);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| err(format!("missing matrix row {i}")))?;
            let cells = parse_row(line, i)?;
            if cells.len() != cols {
                return Err(err(format!(
                    "row {i} has {} cells, expected {cols}",
                    cells.len()
                )));
            }
            entries.push(cells);
        }
        if lines.next().is_some() {
            return Err(err("trailing content after the matrix"));
        }
        CodeFile::new(p, r, kind, role, entries)
    }

    pub fn to_json(&self) -> String {
        let json = JsonFile {
            version: FORMAT_VERSION,
            p: self.p,
            r: self.r,
            kind: self.kind,
            role: self.role,
            entries: self.entries.clone(),
        };
        let mut text = serde_json::to_string_pretty(&json).expect("serializable");
        text.push('\n');
        text
    }

    pub fn parse_json(text: &str) -> Result<Self, ParseError> {
        let json: JsonFile =
            serde_json::from_str(text).map_err(|e| err(format!("invalid JSON: {e}")))?;
        if json.version != FORMAT_VERSION {
            return Err(err(format!("unsupported format version {}", json.version)));
        }
        CodeFile::new(json.p, json.r, json.kind, json.role, json.entries)
    }

    pub fn read(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::parse_json(&text)
        } else {
            Self::parse_text(&text)
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), ParseError> {
        let text = if path.extension().is_some_and(|e| e == "json") {
            self.to_json()
        } else {
            self.to_text()
        };
        std::fs::write(path, text)
            .map_err(|e| err(format!("cannot write {}: {e}", path.display())))
    }
}

fn trim_entries(entries: Vec<Vec<Vec<u64>>>) -> Vec<Vec<Vec<u64>>> {
    entries
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|mut cell| {
                    while cell.last() == Some(&0) {
                        cell.pop();
                    }
                    cell
                })
                .collect()
        })
        .collect()
}

fn render_cell(cell: &[u64]) -> String {
    let inner: Vec<String> = cell.iter().map(u64::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn parse_row(line: &str, row: usize) -> Result<Vec<Vec<u64>>, ParseError> {
    let mut cells = Vec::new();
    let mut rest = line.trim();
    let mut cell_idx = 0usize;
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(err(format!(
                "row {row}, cell {cell_idx}: expected '[' at '{rest}'"
            )));
        }
        let close = rest.find(']').ok_or_else(|| {
            err(format!("row {row}, cell {cell_idx}: unterminated cell"))
        })?;
        let body = &rest[1..close];
        let mut cell = Vec::new();
        if !body.trim().is_empty() {
            for piece in body.split(',') {
                let value: u64 = piece.trim().parse().map_err(|_| {
                    err(format!(
                        "row {row}, cell {cell_idx}: unreadable coefficient '{piece}'"
                    ))
                })?;
                cell.push(value);
            }
        }
        cells.push(cell);
        rest = rest[close + 1..].trim_start();
        cell_idx += 1;
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CodeFile {
        CodeFile::new(
            5,
            2,
            Kind::Convolutional,
            Role::PEncoder,
            vec![
                vec![vec![1, 1], vec![1, 2]],
                vec![vec![5, 5], vec![5, 10]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip_is_byte_stable() {
        let file = sample();
        let text = file.to_text();
        let parsed = CodeFile::parse_text(&text).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.to_text(), text);
    }

    #[test]
    fn json_round_trip() {
        let file = sample();
        let parsed = CodeFile::parse_json(&file.to_json()).unwrap();
        assert_eq!(parsed, file);
    }

    #[test]
    fn out_of_range_entry_names_the_cell() {
        let result = CodeFile::new(
            5,
            2,
            Kind::Convolutional,
            Role::PEncoder,
            vec![vec![vec![1], vec![27]]],
        );
        let msg = result.unwrap_err().to_string();
        assert!(msg.contains("row 0, cell 1"), "{msg}");
        assert!(msg.contains("27"), "{msg}");
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "# a comment\nzprcode 1\np 2\nr 2\nkind block\nrole generator\n\nrows 1\ncols 2\n[1] [3]\n";
        let file = CodeFile::parse_text(text).unwrap();
        assert_eq!(file.entries, vec![vec![vec![1], vec![3]]]);
    }

    #[test]
    fn zero_cells_render_empty_brackets() {
        let file = CodeFile::new(
            2,
            2,
            Kind::Block,
            Role::Generator,
            vec![vec![vec![0], vec![1]]],
        )
        .unwrap();
        assert_eq!(file.entries[0][0], Vec::<u64>::new());
        let text = file.to_text();
        assert!(text.contains("[] [1]"));
        assert_eq!(CodeFile::parse_text(&text).unwrap(), file);
    }
}

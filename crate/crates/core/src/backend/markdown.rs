//! Minimal pipe-table reading and writing.

/// A pipe table: optional header (present when a `|---|` separator follows
/// the first line) and data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MdTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
}

pub fn split_cells(line: &str) -> Vec<String> {
    let inner = line.trim();
    let inner = inner.strip_prefix('|').unwrap_or(inner);
    let inner = inner.strip_suffix('|').unwrap_or(inner);
    inner.split('|').map(|c| c.trim().to_string()).collect()
}

fn is_separator(line: &str) -> bool {
    let cells = split_cells(line);
    !cells.is_empty()
        && cells
            .iter()
            .all(|c| !c.is_empty() && c.chars().all(|ch| matches!(ch, '-' | ':' | ' ')) && c.contains('-'))
}

fn is_table_line(line: &str) -> bool {
    line.trim_start().starts_with('|')
}

/// Every pipe table in `text`, in order of appearance.
pub fn tables(text: &str) -> Vec<MdTable> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if !is_table_line(lines[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < lines.len() && is_table_line(lines[i]) {
            i += 1;
        }
        let block = &lines[start..i];
        let table = if block.len() >= 2 && is_separator(block[1]) {
            MdTable {
                header: Some(split_cells(block[0])),
                rows: block[2..].iter().filter(|l| !is_separator(l)).map(|l| split_cells(l)).collect(),
            }
        } else {
            MdTable { header: None, rows: block.iter().filter(|l| !is_separator(l)).map(|l| split_cells(l)).collect() }
        };
        if !table.rows.is_empty() {
            out.push(table);
        }
    }
    out
}

/// The first table with at least one data row.
pub fn first_table(text: &str) -> Option<MdTable> {
    tables(text).into_iter().next()
}

/// Removes `**bold**`, `*em*` and backtick wrapping around a cell value.
pub fn strip_emphasis(cell: &str) -> &str {
    cell.trim().trim_matches(|c| c == '*' || c == '`' || c == '_').trim()
}

pub fn render<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::from("|");
        for c in cells {
            s.push(' ');
            s.push_str(c);
            s.push_str(" |");
        }
        s.push('\n');
        s
    };
    out.push_str(&line(&mut header.iter().map(AsRef::as_ref)));
    out.push_str(&line(&mut header.iter().map(|_| "---")));
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use super::{Graph, GraphError, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

fn err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

fn sixbits(bytes: &[u8], offset: usize) -> Result<u8, GraphError> {
    match bytes.get(offset) {
        Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
        Some(&b) => Err(err(offset, format!("byte {b:#04x} outside the range 63..=126"))),
        None => Err(err(offset, "unexpected end of input")),
    }
}

/// Parses one graph6 record. A leading `>>graph6<<` header and a trailing
/// line terminator are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let text = text.trim_end_matches(['\n', '\r']);
    let (bytes, base) = match text.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (text.as_bytes(), 0),
    };
    if bytes.is_empty() {
        return Err(err(base, "empty record"));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.get(1) == Some(&126) {
            return Err(err(base + 1, format!("eight-byte size header exceeds {MAX_VERTICES} vertices")));
        }
        let mut n = 0usize;
        for i in 1..4 {
            n = (n << 6) | sixbits(bytes, i).map_err(|e| shift(e, base))? as usize;
        }
        if n < 63 {
            return Err(err(base, format!("long size header used for n = {n}")));
        }
        (n, 4)
    } else {
        (sixbits(bytes, 0).map_err(|e| shift(e, base))? as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(err(base, format!("{n} vertices exceeds the limit of {MAX_VERTICES}")));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < pos + nbytes {
        return Err(err(base + bytes.len(), "record truncated"));
    }
    if bytes.len() > pos + nbytes {
        return Err(err(base + pos + nbytes, "trailing bytes after record"));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if k % 6 == 0 {
                cur = sixbits(bytes, pos).map_err(|e| shift(e, base))?;
                pos += 1;
            }
            if cur & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if k % 6 != 0 && cur & ((1u8 << (6 - k % 6)) - 1) != 0 {
        return Err(err(base + pos - 1, "nonzero padding bits"));
    }
    Ok(g)
}

fn shift(e: GraphError, base: usize) -> GraphError {
    match e {
        GraphError::Graph6 { offset, reason } => GraphError::Graph6 {
            offset: offset + base,
            reason,
        },
        other => other,
    }
}

/// Parses newline-separated graph6 records, skipping blank lines.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<Graph>, GraphError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(parse_graph6)
        .collect()
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::with_capacity(4 + n * n / 12);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut k = 0usize;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                cur |= 1 << (5 - k % 6);
            }
            k += 1;
            if k % 6 == 0 {
                out.push(cur + 63);
                cur = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push(cur + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

//! CMX v1 matrix files: a one-line header `CMX 1 <rows> <cols>` followed by
//! `rows * cols` row-major lines of `<re> <im>`, written as shortest
//! round-trip decimals so that write then parse is the bitwise identity.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        msg: msg.into(),
    }
}

/// Serializes a matrix in CMX v1 form.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "CMX 1 {} {}", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            let _ = writeln!(out, "{} {}", z.re, z.im);
        }
    }
    out
}

/// Parses a CMX v1 document.
pub fn read_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty document, expected CMX header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "CMX" {
        return Err(parse_err(1, format!("malformed header {header:?}")));
    }
    if fields[1] != "1" {
        return Err(parse_err(1, format!("unsupported CMX version {:?}", fields[1])));
    }
    let rows: usize = fields[2]
        .parse()
        .map_err(|_| parse_err(1, format!("bad row count {:?}", fields[2])))?;
    let cols: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(1, format!("bad column count {:?}", fields[3])))?;

    let mut entries = Vec::with_capacity(rows * cols);
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            // Only trailing blank lines are tolerated.
            continue;
        }
        if entries.len() == rows * cols {
            return Err(parse_err(line_no, "data past the expected entry count"));
        }
        let mut parts = line.split_whitespace();
        let (re_s, im_s) = match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => return Err(parse_err(line_no, format!("expected `<re> <im>`, got {line:?}"))),
        };
        let re: f64 = re_s
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad real part {re_s:?}")))?;
        let im: f64 = im_s
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad imaginary part {im_s:?}")))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err(line_no, "non-finite matrix entry"));
        }
        entries.push(Complex64::new(re, im));
    }
    if entries.len() != rows * cols {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {} entries, found {}", rows * cols, entries.len()),
        ));
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, &entries))
}

/// Reads a CMX file from disk.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    read_matrix(&text)
}

/// Writes a CMX file to disk.
pub fn save_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, write_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::testgen::{random_hermitian, RandomOperatorSpec};

    #[test]
    fn round_trip_identity() {
        let m = identity(3);
        let text = write_matrix(&m);
        let back = read_matrix(&text).unwrap();
        assert_eq!(m, back);
        assert_eq!(text, write_matrix(&back));
    }

    #[test]
    fn round_trip_random_bitwise() {
        let spec = RandomOperatorSpec {
            dim: 8,
            rank: 6,
            n_negative: 2,
            spectrum_range: (0.2, 3.0),
            seed: 3,
        };
        let m = random_hermitian(&spec).unwrap().matrix().clone();
        let text = write_matrix(&m);
        let back = read_matrix(&text).unwrap();
        // Bitwise equality entry by entry.
        for (a, b) in m.iter().zip(back.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(text, write_matrix(&back));
    }

    #[test]
    fn malformed_inputs() {
        match read_matrix("XMC 1 2 2\n") {
            Err(Error::ParseError { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match read_matrix("CMX 2 1 1\n0 0\n") {
            Err(Error::ParseError { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match read_matrix("CMX 1 1 1\n0\n") {
            Err(Error::ParseError { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match read_matrix("CMX 1 2 1\n0 0\n") {
            Err(Error::ParseError { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match read_matrix("CMX 1 1 1\n1 nan\n") {
            Err(Error::ParseError { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}

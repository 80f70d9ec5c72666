use super::{GraphError, PlanarEmbeddedGraph};
use std::io::{Read, Write};

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

/// Lazy reader over a `planar_code` stream with single-byte entries.
pub struct PlanarCodeReader<R: Read> {
    bytes: std::iter::Peekable<std::io::Bytes<std::io::BufReader<R>>>,
    offset: usize,
    header_checked: bool,
    failed: bool,
}

impl<R: Read> PlanarCodeReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            bytes: std::io::BufReader::new(reader).bytes().peekable(),
            offset: 0,
            header_checked: false,
            failed: false,
        }
    }

    /// Byte offset of the next unread byte.
    pub fn offset(&self) -> usize {
        self.offset
    }

    fn next_byte(&mut self) -> Result<Option<u8>, GraphError> {
        match self.bytes.next() {
            None => Ok(None),
            Some(Ok(b)) => {
                self.offset += 1;
                Ok(Some(b))
            }
            Some(Err(e)) => Err(GraphError::Io(e.to_string())),
        }
    }

    fn expect_byte(&mut self, what: &str) -> Result<u8, GraphError> {
        let at = self.offset;
        self.next_byte()?.ok_or_else(|| GraphError::Parse {
            offset: at,
            message: format!("truncated record: expected {what}"),
        })
    }

    fn check_header(&mut self) -> Result<(), GraphError> {
        for &h in PLANAR_CODE_HEADER {
            let at = self.offset;
            match self.next_byte()? {
                Some(b) if b == h => {}
                _ => {
                    return Err(GraphError::Parse {
                        offset: at,
                        message: "missing >>planar_code<< header".into(),
                    })
                }
            }
        }
        Ok(())
    }

    fn read_graph(&mut self) -> Result<Option<PlanarEmbeddedGraph>, GraphError> {
        let start = self.offset;
        let Some(n) = self.next_byte()? else {
            return Ok(None);
        };
        if n == 0 {
            return Err(GraphError::Parse {
                offset: start,
                message: "two-byte planar_code records are not supported".into(),
            });
        }
        let n = n as usize;
        let mut rotation = Vec::with_capacity(n);
        for v in 0..n {
            let mut nbrs = Vec::new();
            loop {
                let at = self.offset;
                let b = self.expect_byte(&format!("neighbour list of vertex {}", v + 1))?;
                if b == 0 {
                    break;
                }
                if b as usize > n {
                    return Err(GraphError::Parse {
                        offset: at,
                        message: format!("neighbour {b} out of range 1..={n}"),
                    });
                }
                nbrs.push(b as usize - 1);
            }
            rotation.push(nbrs);
        }
        PlanarEmbeddedGraph::from_rotation(rotation)
            .map(Some)
            .map_err(|e| GraphError::Parse { offset: start, message: e.to_string() })
    }
}

impl<R: Read> Iterator for PlanarCodeReader<R> {
    type Item = Result<PlanarEmbeddedGraph, GraphError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if !self.header_checked {
            self.header_checked = true;
            // a zero-byte stream is an empty file, not a malformed one
            if self.bytes.peek().is_none() {
                return None;
            }
            if let Err(e) = self.check_header() {
                self.failed = true;
                return Some(Err(e));
            }
        }
        match self.read_graph() {
            Ok(Some(g)) => Some(Ok(g)),
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a complete in-memory stream.
pub fn parse_planar_code(bytes: &[u8]) -> Result<Vec<PlanarEmbeddedGraph>, GraphError> {
    PlanarCodeReader::new(bytes).collect()
}

/// Writes the header followed by one record per graph.
pub fn write_planar_code<'a, W: Write>(
    mut w: W,
    graphs: impl IntoIterator<Item = &'a PlanarEmbeddedGraph>,
) -> Result<(), GraphError> {
    let io = |e: std::io::Error| GraphError::Io(e.to_string());
    w.write_all(PLANAR_CODE_HEADER).map_err(io)?;
    for g in graphs {
        if g.n() == 0 || g.n() > 255 {
            return Err(GraphError::Degenerate(format!("cannot encode n = {}", g.n())));
        }
        let mut rec = Vec::with_capacity(1 + g.n() + 2 * g.num_edges());
        rec.push(g.n() as u8);
        for v in 0..g.n() {
            rec.extend(g.neighbors(v).iter().map(|&u| (u + 1) as u8));
            rec.push(0);
        }
        w.write_all(&rec).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_encoded_k4() {
        let mut b = PLANAR_CODE_HEADER.to_vec();
        b.extend([4, 2, 3, 4, 0, 1, 4, 3, 0, 1, 2, 4, 0, 1, 3, 2, 0]);
        let gs = parse_planar_code(&b).unwrap();
        assert_eq!(gs.len(), 1);
        let f = gs[0].faces().unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|f| f.len() == 3));
        let mut out = Vec::new();
        write_planar_code(&mut out, &gs).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(
            parse_planar_code(b">>planar_cod"),
            Err(GraphError::Parse { offset: 12, .. })
        ));
        let mut b = PLANAR_CODE_HEADER.to_vec();
        b.extend([3, 2, 0, 1]);
        assert!(matches!(parse_planar_code(&b), Err(GraphError::Parse { offset: 19, .. })));
        let mut b = PLANAR_CODE_HEADER.to_vec();
        b.extend([2, 5, 0]);
        assert!(matches!(parse_planar_code(&b), Err(GraphError::Parse { offset: 16, .. })));
        assert!(parse_planar_code(PLANAR_CODE_HEADER).unwrap().is_empty());
    }
}

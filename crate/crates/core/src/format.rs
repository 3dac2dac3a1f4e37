//! graph6 / sparse6 codecs (the nauty formats) and the plain-text digraph
//! edge list.
//!
//! Encoders emit the header-less form without a trailing newline. Decoders
//! accept an optional `>>graph6<<` / `>>sparse6<<` header and ignore one
//! trailing line terminator.

use std::fmt::Write as _;

use crate::error::{parse_err, Result};
#[cfg(test)]
use crate::error::Error;
use crate::graph::{Digraph, Graph};

const BIAS: u8 = 63;
const MAX_ORDER: usize = (1 << 36) - 1;

fn encode_order(n: usize, out: &mut Vec<u8>) {
    assert!(n <= MAX_ORDER, "graph6 cannot encode {n} vertices");
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else if n < 258048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    }
}

/// Returns `(n, bytes consumed)`.
fn decode_order(data: &[u8], base: usize) -> Result<(usize, usize)> {
    let sextet = |i: usize| -> Result<usize> {
        match data.get(i) {
            None => Err(parse_err(base + i, "truncated vertex-count prefix")),
            Some(&b) if (BIAS..=126).contains(&b) => Ok((b - BIAS) as usize),
            Some(&b) => Err(parse_err(base + i, format!("byte {b} outside 63..=126"))),
        }
    };
    let first = sextet(0)?;
    if first < 63 {
        return Ok((first, 1));
    }
    if data.get(1) == Some(&126) {
        let mut n = 0;
        for i in 2..8 {
            n = (n << 6) | sextet(i)?;
        }
        if n < 258048 {
            return Err(parse_err(base, "non-minimal 8-byte vertex count"));
        }
        Ok((n, 8))
    } else {
        let mut n = 0;
        for i in 1..4 {
            n = (n << 6) | sextet(i)?;
        }
        if n < 63 {
            return Err(parse_err(base, "non-minimal 4-byte vertex count"));
        }
        Ok((n, 4))
    }
}

fn pack_bits(bits: &[bool], out: &mut Vec<u8>) {
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for i in 0..6 {
            v <<= 1;
            if chunk.get(i).copied().unwrap_or(false) {
                v |= 1;
            }
        }
        out.push(v + BIAS);
    }
}

fn strip<'a>(s: &'a [u8], header: &[u8]) -> (&'a [u8], usize) {
    let mut s = s;
    while let Some((&last, rest)) = s.split_last() {
        if last == b'\n' || last == b'\r' {
            s = rest;
        } else {
            break;
        }
    }
    match s.strip_prefix(header) {
        Some(rest) => (rest, header.len()),
        None => (s, 0),
    }
}

pub fn encode_graph6(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::new();
    encode_order(n, &mut out);
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    pack_bits(&bits, &mut out);
    out
}

pub fn encode_graph6_string(g: &Graph) -> String {
    String::from_utf8(encode_graph6(g)).expect("graph6 is printable ASCII")
}

pub fn decode_graph6(s: &[u8]) -> Result<Graph> {
    let (s, base) = strip(s, b">>graph6<<");
    let (n, used) = decode_order(s, base)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let body = &s[used..];
    if body.len() != expected {
        let offset = base + used + body.len().min(expected);
        return Err(parse_err(
            offset,
            format!("expected {expected} data bytes for {n} vertices, found {}", body.len()),
        ));
    }
    let mut edges = Vec::new();
    let (mut i, mut j) = (0usize, 1usize);
    for (k, &b) in body.iter().enumerate() {
        if !(BIAS..=126).contains(&b) {
            return Err(parse_err(base + used + k, format!("byte {b} outside 63..=126")));
        }
        let v = b - BIAS;
        for bit in (0..6).rev() {
            let pos = 6 * k + (5 - bit);
            let set = (v >> bit) & 1 == 1;
            if pos >= nbits {
                if set {
                    return Err(parse_err(base + used + k, "non-zero padding bits"));
                }
                continue;
            }
            if set {
                edges.push((i, j));
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Encodes following nauty's `ntos6`, including its padding rule for
/// `n = 2^k` with `k < 6`.
pub fn encode_sparse6(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = vec![b':'];
    encode_order(n, &mut out);
    let k = bit_width(n);
    let mut bits: Vec<bool> = Vec::new();
    let push = |bits: &mut Vec<bool>, x: usize| {
        for i in (0..k).rev() {
            bits.push((x >> i) & 1 == 1);
        }
    };
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (v, u)).collect();
    edges.sort_unstable();
    let mut cur = 0;
    for (v, u) in edges {
        if v == cur {
            bits.push(false);
            push(&mut bits, u);
        } else if v == cur + 1 {
            cur = v;
            bits.push(true);
            push(&mut bits, u);
        } else {
            cur = v;
            bits.push(true);
            push(&mut bits, v);
            bits.push(false);
            push(&mut bits, u);
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    if k < 6 && n == 1 << k && pad >= k && cur < n - 1 {
        bits.push(false);
    }
    let pad = (6 - bits.len() % 6) % 6;
    bits.extend(std::iter::repeat_n(true, pad));
    pack_bits(&bits, &mut out);
    out
}

fn bit_width(n: usize) -> usize {
    let mut k = 1;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sparse6 {
    pub graph: Graph,
    /// Set when the stream listed some edge more than once (a multigraph
    /// input); the parallel copies were collapsed.
    pub collapsed_parallel: bool,
    /// Set when the stream contained loops, which were dropped.
    pub dropped_loops: bool,
}

pub fn decode_sparse6(s: &[u8]) -> Result<Sparse6> {
    let (s, mut base) = strip(s, b">>sparse6<<");
    let s = match s.split_first() {
        Some((b':', rest)) => {
            base += 1;
            rest
        }
        _ => return Err(parse_err(base, "sparse6 must start with ':'")),
    };
    let (n, used) = decode_order(s, base)?;
    let body = &s[used..];
    let mut data = Vec::with_capacity(body.len());
    for (i, &b) in body.iter().enumerate() {
        if !(BIAS..=126).contains(&b) {
            return Err(parse_err(base + used + i, format!("byte {b} outside 63..=126")));
        }
        data.push(b - BIAS);
    }
    let k = bit_width(n);
    let total = data.len() * 6;
    let bit = |pos: usize| (data[pos / 6] >> (5 - pos % 6)) & 1 == 1;
    let mut pos = 0;
    let mut v = 0usize;
    let mut edges = Vec::new();
    let mut dropped_loops = false;
    while pos + 1 + k <= total {
        let b = bit(pos);
        let mut x = 0usize;
        for i in 0..k {
            x = (x << 1) | bit(pos + 1 + i) as usize;
        }
        pos += 1 + k;
        if b {
            v += 1;
        }
        if x >= n || v >= n {
            break;
        } else if x > v {
            v = x;
        } else if x == v {
            dropped_loops = true;
        } else {
            edges.push((x, v));
        }
    }
    let listed = edges.len();
    let graph = Graph::from_edges(n, edges)?;
    Ok(Sparse6 {
        collapsed_parallel: graph.edge_count() != listed,
        dropped_loops,
        graph,
    })
}

/// Decodes one line in either format, picking sparse6 on a leading ':'.
pub fn decode_any(line: &[u8]) -> Result<Graph> {
    let (body, _) = strip(line, b"");
    if body.starts_with(b":") || body.starts_with(b">>sparse6<<") {
        decode_sparse6(line).map(|s| s.graph)
    } else {
        decode_graph6(line)
    }
}

/// `n m` on the first line, then one `u v` line per arc.
pub fn write_edge_list(d: &Digraph) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", d.order(), d.arc_count()).unwrap();
    for (u, v) in d.arcs() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn read_edge_list(text: &str) -> Result<Digraph> {
    let mut offset = 0;
    let mut lines = text.split_inclusive('\n').map(|line| {
        let start = offset;
        offset += line.len();
        (start, line.trim_end_matches(['\n', '\r']))
    });
    let (start, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `n m` header"))?;
    let [n, m] = parse_pair(header, start)?;
    let mut arcs = Vec::with_capacity(m);
    for (start, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        arcs.push(parse_pair(line, start)?);
    }
    if arcs.len() != m {
        return Err(parse_err(
            text.len(),
            format!("header announces {m} arcs, found {}", arcs.len()),
        ));
    }
    Digraph::from_arcs(n, arcs.into_iter().map(|[u, v]| (u, v)))
}

fn parse_pair(line: &str, offset: usize) -> Result<[usize; 2]> {
    let mut fields = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = fields
            .next()
            .ok_or_else(|| parse_err(offset, "expected two integers"))?;
        tok.parse()
            .map_err(|_| parse_err(offset, format!("`{tok}` is not a vertex index")))
    };
    let pair = [next()?, next()?];
    if fields.next().is_some() {
        return Err(parse_err(offset, "trailing tokens"));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn graph6_reference_strings() {
        assert_eq!(encode_graph6(&Graph::complete(4)), b"C~");
        assert_eq!(encode_graph6(&Graph::empty(1)), b"@");
        assert_eq!(encode_graph6(&Graph::empty(0)), b"?");
        assert_eq!(encode_graph6(&cycle(5)), b"Dhc");
    }

    #[test]
    fn graph6_long_prefix() {
        let g = cycle(70);
        let enc = encode_graph6(&g);
        assert_eq!(&enc[..4], b"~?@E");
        assert_eq!(decode_graph6(&enc).unwrap(), g);
    }

    #[test]
    fn graph6_accepts_header_and_newline() {
        assert_eq!(decode_graph6(b">>graph6<<C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        match decode_graph6(b"C") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        // K4 needs 6 bits: 'C~' is fine, '~' alone is a truncated long prefix.
        assert!(matches!(decode_graph6(b"~?"), Err(Error::Parse { offset: 2, .. })));
        // n = 3 uses 3 of the 6 data bits; '@' sets the last padding bit.
        assert!(matches!(decode_graph6(b"B@"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode_graph6(b"C~~"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sparse6_reference_strings() {
        assert_eq!(encode_sparse6(&Graph::complete(4)), b":CcKI");
        assert_eq!(encode_sparse6(&cycle(5)), b":DaY_~");
        assert_eq!(encode_sparse6(&Graph::empty(1)), b":@");
        let big = encode_sparse6(&cycle(70));
        assert!(big.starts_with(b":~?@E_GEA_wQD`g]GaWiJbGuMbxAPchMSdXYVeHeYexq"));
        assert!(big.ends_with(b"okM?PN"));
    }

    #[test]
    fn sparse6_heawood_reference() {
        let s = decode_sparse6(b":M`ESwCjGtyGaeqhj_`f\n").unwrap();
        assert_eq!(s.graph.order(), 14);
        assert!(s.graph.is_regular(3));
        assert!(!s.collapsed_parallel);
        assert_eq!(s.graph.girth(), Some(6));
    }

    #[test]
    fn sparse6_round_trip_c5() {
        let g = cycle(5);
        assert_eq!(decode_sparse6(&encode_sparse6(&g)).unwrap().graph, g);
    }

    #[test]
    fn sparse6_truncated_stream() {
        assert!(matches!(decode_sparse6(b":"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode_sparse6(b":~?"), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(decode_sparse6(b"C~"), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn sparse6_multigraph_collapses() {
        // n = 2, k = 1: edge 0-1 listed twice: bits 1 0 | 0 0 -> then pad.
        // b=1,x=0 (v=1, edge 0-1); b=0,x=0 (edge 0-1 again); pad '11'.
        let bits = [true, false, false, false, true, true];
        let mut out = vec![b':', b'A'];
        pack_bits(&bits, &mut out);
        let s = decode_sparse6(&out).unwrap();
        assert_eq!(s.graph.edge_count(), 1);
        assert!(s.collapsed_parallel);
    }

    #[test]
    fn edge_list_round_trip() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let text = write_edge_list(&d);
        assert_eq!(text, "3 4\n0 1\n0 2\n1 2\n2 0\n");
        assert_eq!(read_edge_list(&text).unwrap(), d);
    }

    #[test]
    fn edge_list_errors() {
        assert!(read_edge_list("").is_err());
        assert!(read_edge_list("3 2\n0 1\n").is_err());
        assert!(matches!(read_edge_list("3 1\n0 x\n"), Err(Error::Parse { offset: 4, .. })));
        assert_eq!(read_edge_list("3 1\n1 1\n"), Err(Error::Loop(1, 1)));
    }
}

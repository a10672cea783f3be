//! Binary graph file (`LRPG`), all integers little-endian:
//!
//! | field          | type                         |
//! |----------------|------------------------------|
//! | magic          | `b"LRPG"`                    |
//! | format version | u16 (= 1)                    |
//! | d              | u16                          |
//! | N              | u64                          |
//! | β              | f64                          |
//! | s              | f64                          |
//! | seed           | u64                          |
//! | generator id   | u16 byte length, then UTF-8  |
//! | edge count     | u64                          |
//! | edges          | edge count × (u64, u64)      |
//!
//! Each edge is written smaller index first; edges are sorted.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, ModelParams};
use crate::lattice::BoxSpec;

pub const MAGIC: &[u8; 4] = b"LRPG";
pub const FORMAT_VERSION: u16 = 1;

pub fn write_graph<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    let spec = graph.box_spec();
    let dim = u16::try_from(spec.dim())
        .map_err(|_| Error::Format(format!("dimension {} does not fit in u16", spec.dim())))?;
    let id = graph.generator_id().as_bytes();
    let id_len = u16::try_from(id.len())
        .map_err(|_| Error::Format("generator id longer than 65535 bytes".into()))?;
    out.write_all(MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&dim.to_le_bytes())?;
    out.write_all(&spec.side().to_le_bytes())?;
    out.write_all(&graph.params().beta().to_le_bytes())?;
    out.write_all(&graph.params().exponent().to_le_bytes())?;
    out.write_all(&graph.seed().to_le_bytes())?;
    out.write_all(&id_len.to_le_bytes())?;
    out.write_all(id)?;
    out.write_all(&(graph.edge_count() as u64).to_le_bytes())?;
    for &(a, b) in graph.edges() {
        out.write_all(&a.to_le_bytes())?;
        out.write_all(&b.to_le_bytes())?;
    }
    Ok(())
}

pub fn encode_graph(graph: &Graph) -> Vec<u8> {
    let mut buf = Vec::with_capacity(64 + 16 * graph.edge_count());
    write_graph(graph, &mut buf).expect("writing to memory cannot fail");
    buf
}

fn take<const K: usize, R: Read>(input: &mut R) -> Result<[u8; K]> {
    let mut b = [0u8; K];
    input.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("file truncated".into()),
        _ => Error::Io(e),
    })?;
    Ok(b)
}

/// Reads and validates a graph file. Edge order and nearest-neighbour
/// completeness are checked.
pub fn read_graph<R: Read>(mut input: R) -> Result<Graph> {
    if &take::<4, _>(&mut input)? != MAGIC {
        return Err(Error::Format("bad magic, expected LRPG".into()));
    }
    let version = u16::from_le_bytes(take(&mut input)?);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format version {version}"
        )));
    }
    let dim = u16::from_le_bytes(take(&mut input)?) as usize;
    let side = u64::from_le_bytes(take(&mut input)?);
    let beta = f64::from_le_bytes(take(&mut input)?);
    let exponent = f64::from_le_bytes(take(&mut input)?);
    let seed = u64::from_le_bytes(take(&mut input)?);
    let id_len = u16::from_le_bytes(take(&mut input)?) as usize;
    let mut id = vec![0u8; id_len];
    input
        .read_exact(&mut id)
        .map_err(|_| Error::Format("file truncated in generator id".into()))?;
    let generator_id =
        String::from_utf8(id).map_err(|_| Error::Format("generator id is not UTF-8".into()))?;
    let count = u64::from_le_bytes(take(&mut input)?);

    let spec = BoxSpec::new(dim, side)?;
    let params = ModelParams::with_exponent(beta, exponent, dim)?;
    let max_pairs = spec.site_count().saturating_mul(spec.site_count() - 1) / 2;
    if count > max_pairs {
        return Err(Error::Format(format!(
            "edge count {count} exceeds the {max_pairs} pairs of the box"
        )));
    }
    let mut edges = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let a = u64::from_le_bytes(take(&mut input)?);
        let b = u64::from_le_bytes(take(&mut input)?);
        if a >= b {
            return Err(Error::Format(format!(
                "edge ({a}, {b}) not written smaller first"
            )));
        }
        if edges.last().is_some_and(|&last| last >= (a, b)) {
            return Err(Error::Format("edges are not strictly sorted".into()));
        }
        edges.push((a, b));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after edge list".into()));
    }
    Graph::from_edges(spec, params, seed, generator_id, edges)
}

pub fn decode_graph(bytes: &[u8]) -> Result<Graph> {
    read_graph(bytes)
}

//! Binary tensor files.
//!
//! Layout, all little-endian: magic `QCTN`, `u32` version, `u32` rank, then
//! per axis a `u8` kind (0 = cut edge, 1 = output), `u32` id and `u64` size,
//! followed by the row-major `f64` entries.

use std::io::{Read, Write};

use ndarray::{ArrayD, IxDyn};

use super::{AxisLabel, LabeledTensor};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"QCTN";
const VERSION: u32 = 1;

pub fn write_tensor<W: Write>(w: &mut W, t: &LabeledTensor) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(t.labels.len() as u32).to_le_bytes())?;
    for (label, &size) in t.labels.iter().zip(t.data.shape()) {
        let (kind, id) = match *label {
            AxisLabel::Cut(e) => (0u8, e),
            AxisLabel::Out(j) => (1u8, j),
        };
        w.write_all(&[kind])?;
        w.write_all(&(id as u32).to_le_bytes())?;
        w.write_all(&(size as u64).to_le_bytes())?;
    }
    for v in t.data.as_standard_layout().iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::TensorFile(format!("truncated file: {e}")))?;
    Ok(buf)
}

pub fn read_tensor<R: Read>(r: &mut R) -> Result<LabeledTensor> {
    if &read_array::<4, _>(r)? != MAGIC {
        return Err(Error::TensorFile("bad magic".into()));
    }
    let version = u32::from_le_bytes(read_array(r)?);
    if version != VERSION {
        return Err(Error::TensorFile(format!("unsupported version {version}")));
    }
    let rank = u32::from_le_bytes(read_array(r)?) as usize;
    let mut labels = Vec::with_capacity(rank);
    let mut shape = Vec::with_capacity(rank);
    for _ in 0..rank {
        let [kind] = read_array::<1, _>(r)?;
        let id = u32::from_le_bytes(read_array(r)?) as usize;
        let size = u64::from_le_bytes(read_array(r)?) as usize;
        labels.push(match kind {
            0 => AxisLabel::Cut(id),
            1 => AxisLabel::Out(id),
            k => return Err(Error::TensorFile(format!("unknown axis kind {k}"))),
        });
        shape.push(size);
    }
    let len = shape
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::TensorFile("tensor too large".into()))?;
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        data.push(f64::from_le_bytes(read_array(r)?));
    }
    let data = ArrayD::from_shape_vec(IxDyn(&shape), data).map_err(|e| Error::TensorFile(e.to_string()))?;
    Ok(LabeledTensor { labels, data })
}

//! Canonical byte encoding shared by transcripts and challenge derivation.
//!
//! Layout rules: counts, ids and lengths are `u64` little-endian; residues mod
//! `m` occupy the fixed width needed for `m - 1`; unreduced integers are `i64`
//! little-endian; sequences carry a `u64` length prefix; maps are written in
//! ascending key order; absent values are a `0` presence byte. Every value has
//! exactly one encoding, and decoders reject anything else.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::math::{Modulus, ZVector, ZqMatrix, ZqVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("value out of range: {0}")]
    OutOfRange(&'static str),
    #[error("invalid tag {0}")]
    InvalidTag(u8),
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("integrity digest mismatch")]
    DigestMismatch,
    #[error("malformed: {0}")]
    Malformed(&'static str),
}

pub type DecodeResult<T> = core::result::Result<T, DecodeError>;

/// Moduli needed to decode residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodecContext {
    pub q: Modulus,
    pub p: Modulus,
}

#[derive(Default, Debug, Clone)]
pub struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn raw(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u16(&mut self, v: u16) {
        self.raw(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.raw(&v.to_le_bytes());
    }

    pub fn i64(&mut self, v: i64) {
        self.raw(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    pub fn bool(&mut self, v: bool) {
        self.u8(v as u8);
    }

    pub fn len_prefix(&mut self, n: usize) {
        self.u64(n as u64);
    }

    /// Length-prefixed byte string.
    pub fn bytes(&mut self, b: &[u8]) {
        self.len_prefix(b.len());
        self.raw(b);
    }

    pub fn str(&mut self, s: &str) {
        self.bytes(s.as_bytes());
    }

    /// A residue in `[0, m)` at the modulus' fixed width.
    pub fn residue(&mut self, v: u64, m: Modulus) {
        debug_assert!(v < m.value());
        let w = m.byte_width();
        self.raw(&v.to_le_bytes()[..w]);
    }

    pub fn put<T: Encode + ?Sized>(&mut self, v: &T) {
        v.encode(self);
    }

    pub fn seq<T: Encode>(&mut self, items: &[T]) {
        self.len_prefix(items.len());
        for it in items {
            it.encode(self);
        }
    }

    pub fn option<T: Encode>(&mut self, v: &Option<T>) {
        match v {
            None => self.u8(0),
            Some(x) => {
                self.u8(1);
                x.encode(self);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Decoder<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn finish(self) -> DecodeResult<()> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(DecodeError::TrailingBytes(n)),
        }
    }

    pub fn raw(&mut self, n: usize) -> DecodeResult<&'a [u8]> {
        if self.remaining() < n {
            return Err(DecodeError::UnexpectedEnd);
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn array<const N: usize>(&mut self) -> DecodeResult<[u8; N]> {
        let mut out = [0u8; N];
        out.copy_from_slice(self.raw(N)?);
        Ok(out)
    }

    pub fn u8(&mut self) -> DecodeResult<u8> {
        Ok(self.raw(1)?[0])
    }

    pub fn u16(&mut self) -> DecodeResult<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }

    pub fn u64(&mut self) -> DecodeResult<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    pub fn i64(&mut self) -> DecodeResult<i64> {
        Ok(i64::from_le_bytes(self.array()?))
    }

    pub fn f64(&mut self) -> DecodeResult<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    pub fn bool(&mut self) -> DecodeResult<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            t => Err(DecodeError::InvalidTag(t)),
        }
    }

    /// A length prefix for elements of at least `min_elem_bytes` bytes each;
    /// rejects lengths the remaining input cannot possibly hold.
    pub fn len_prefix(&mut self, min_elem_bytes: usize) -> DecodeResult<usize> {
        let n = self.u64()?;
        let cap = self.remaining() / min_elem_bytes.max(1);
        if n > cap as u64 {
            return Err(DecodeError::Malformed("length exceeds input"));
        }
        Ok(n as usize)
    }

    pub fn bytes(&mut self) -> DecodeResult<&'a [u8]> {
        let n = self.len_prefix(1)?;
        self.raw(n)
    }

    pub fn string(&mut self) -> DecodeResult<alloc::string::String> {
        let b = self.bytes()?;
        core::str::from_utf8(b)
            .map(alloc::string::String::from)
            .map_err(|_| DecodeError::Malformed("invalid utf-8"))
    }

    pub fn residue(&mut self, m: Modulus) -> DecodeResult<u64> {
        let w = m.byte_width();
        let mut le = [0u8; 8];
        le[..w].copy_from_slice(self.raw(w)?);
        let v = u64::from_le_bytes(le);
        if v >= m.value() {
            return Err(DecodeError::OutOfRange("residue"));
        }
        Ok(v)
    }

    pub fn get<T: Decode>(&mut self, cx: &CodecContext) -> DecodeResult<T> {
        T::decode(self, cx)
    }

    pub fn seq<T: Decode>(&mut self, cx: &CodecContext) -> DecodeResult<Vec<T>> {
        let n = self.len_prefix(1)?;
        (0..n).map(|_| T::decode(self, cx)).collect()
    }

    pub fn option<T: Decode>(&mut self, cx: &CodecContext) -> DecodeResult<Option<T>> {
        match self.u8()? {
            0 => Ok(None),
            1 => Ok(Some(T::decode(self, cx)?)),
            t => Err(DecodeError::InvalidTag(t)),
        }
    }
}

pub trait Encode {
    fn encode(&self, enc: &mut Encoder);

    fn to_bytes(&self) -> Vec<u8> {
        let mut e = Encoder::new();
        self.encode(&mut e);
        e.into_bytes()
    }
}

pub trait Decode: Sized {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self>;

    /// Decodes a complete buffer, rejecting trailing bytes.
    fn from_bytes(bytes: &[u8], cx: &CodecContext) -> DecodeResult<Self> {
        let mut d = Decoder::new(bytes);
        let v = Self::decode(&mut d, cx)?;
        d.finish()?;
        Ok(v)
    }
}

impl Encode for u64 {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(*self);
    }
}

impl Decode for u64 {
    fn decode(dec: &mut Decoder<'_>, _: &CodecContext) -> DecodeResult<Self> {
        dec.u64()
    }
}

impl Encode for ZVector {
    fn encode(&self, enc: &mut Encoder) {
        enc.len_prefix(self.len());
        for &x in self.as_slice() {
            enc.i64(x);
        }
    }
}

impl Decode for ZVector {
    fn decode(dec: &mut Decoder<'_>, _: &CodecContext) -> DecodeResult<Self> {
        let n = dec.len_prefix(8)?;
        (0..n).map(|_| dec.i64()).collect::<DecodeResult<Vec<_>>>().map(ZVector)
    }
}

/// Residue vectors are always mod `q` in this protocol.
impl Encode for ZqVector {
    fn encode(&self, enc: &mut Encoder) {
        enc.len_prefix(self.len());
        for &x in self.entries() {
            enc.residue(x, self.modulus());
        }
    }
}

impl Decode for ZqVector {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let n = dec.len_prefix(cx.q.byte_width())?;
        let entries = (0..n).map(|_| dec.residue(cx.q)).collect::<DecodeResult<Vec<_>>>()?;
        ZqVector::from_reduced(entries, cx.q).map_err(|_| DecodeError::OutOfRange("residue"))
    }
}

impl Encode for ZqMatrix {
    fn encode(&self, enc: &mut Encoder) {
        enc.u64(self.rows() as u64);
        enc.u64(self.cols() as u64);
        for &x in self.data() {
            enc.residue(x, self.modulus());
        }
    }
}

impl Decode for ZqMatrix {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let rows = dec.u64()?;
        let cols = dec.u64()?;
        let total = rows
            .checked_mul(cols)
            .filter(|&t| t <= (dec.remaining() / cx.q.byte_width()) as u64)
            .ok_or(DecodeError::Malformed("matrix dimensions exceed input"))?;
        let data = (0..total).map(|_| dec.residue(cx.q)).collect::<DecodeResult<Vec<_>>>()?;
        ZqMatrix::from_reduced(rows as usize, cols as usize, data, cx.q)
            .map_err(|_| DecodeError::Malformed("matrix"))
    }
}

/// Sorted set of ids.
impl Encode for BTreeSet<u64> {
    fn encode(&self, enc: &mut Encoder) {
        enc.len_prefix(self.len());
        for &x in self {
            enc.u64(x);
        }
    }
}

impl Decode for BTreeSet<u64> {
    fn decode(dec: &mut Decoder<'_>, _: &CodecContext) -> DecodeResult<Self> {
        let n = dec.len_prefix(8)?;
        let mut out = BTreeSet::new();
        let mut prev = None;
        for _ in 0..n {
            let x = dec.u64()?;
            if prev.is_some_and(|p| x <= p) {
                return Err(DecodeError::Malformed("set not strictly ascending"));
            }
            prev = Some(x);
            out.insert(x);
        }
        Ok(out)
    }
}

impl<K: Encode + Ord, V: Encode> Encode for BTreeMap<K, V> {
    fn encode(&self, enc: &mut Encoder) {
        enc.len_prefix(self.len());
        for (k, v) in self {
            k.encode(enc);
            v.encode(enc);
        }
    }
}

impl<K: Decode + Ord, V: Decode> Decode for BTreeMap<K, V> {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        let n = dec.len_prefix(1)?;
        let mut out = BTreeMap::new();
        for _ in 0..n {
            let k = K::decode(dec, cx)?;
            if out.last_key_value().is_some_and(|(last, _)| &k <= last) {
                return Err(DecodeError::Malformed("map keys not strictly ascending"));
            }
            let v = V::decode(dec, cx)?;
            out.insert(k, v);
        }
        Ok(out)
    }
}

impl<A: Encode, B: Encode> Encode for (A, B) {
    fn encode(&self, enc: &mut Encoder) {
        self.0.encode(enc);
        self.1.encode(enc);
    }
}

impl<A: Decode, B: Decode> Decode for (A, B) {
    fn decode(dec: &mut Decoder<'_>, cx: &CodecContext) -> DecodeResult<Self> {
        Ok((A::decode(dec, cx)?, B::decode(dec, cx)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx() -> CodecContext {
        CodecContext {
            q: Modulus::new(66049).unwrap(),
            p: Modulus::new(257).unwrap(),
        }
    }

    #[test]
    fn residue_width_for_toy_q() {
        let q = Modulus::new(66049).unwrap();
        let v = ZqVector::from_reduced(alloc::vec![66048, 0], q).unwrap();
        // 8-byte length + 2 entries x 3 bytes
        assert_eq!(v.to_bytes().len(), 8 + 6);
    }

    #[test]
    fn out_of_range_residue_rejected() {
        let mut bytes = alloc::vec![1, 0, 0, 0, 0, 0, 0, 0];
        bytes.extend_from_slice(&66049u32.to_le_bytes()[..3]);
        assert_eq!(
            ZqVector::from_bytes(&bytes, &cx()),
            Err(DecodeError::OutOfRange("residue"))
        );
    }

    #[test]
    fn oversized_length_rejected_without_allocating() {
        let bytes = u64::MAX.to_le_bytes();
        assert!(ZVector::from_bytes(&bytes, &cx()).is_err());
    }

    #[test]
    fn unsorted_map_rejected() {
        let mut e = Encoder::new();
        e.len_prefix(2);
        e.u64(5);
        e.u64(1);
        e.u64(3);
        e.u64(1);
        assert!(BTreeMap::<u64, u64>::from_bytes(e.as_bytes(), &cx()).is_err());
    }

    proptest! {
        #[test]
        fn zvector_round_trip(v in proptest::collection::vec(any::<i64>(), 0..40)) {
            let z = ZVector(v);
            let b = z.to_bytes();
            let back = ZVector::from_bytes(&b, &cx()).unwrap();
            prop_assert_eq!(back.to_bytes(), b);
            prop_assert_eq!(back, z);
        }

        #[test]
        fn zq_round_trip(v in proptest::collection::vec(0u64..66049, 0..40)) {
            let z = ZqVector::from_reduced(v, cx().q).unwrap();
            let b = z.to_bytes();
            prop_assert_eq!(ZqVector::from_bytes(&b, &cx()).unwrap(), z);
        }

        #[test]
        fn map_round_trip(m in proptest::collection::btree_map(any::<u64>(), any::<u64>(), 0..20)) {
            let b = m.to_bytes();
            prop_assert_eq!(BTreeMap::<u64, u64>::from_bytes(&b, &cx()).unwrap(), m);
        }
    }
}

//! Transcript files: parameters, setup seed, directory and epoch records,
//! sealed by a SHA-256 digest over everything before it.
//!
//! Layout: `"LBCN"`, version `u16`, digest algorithm tag `u8`, parameters,
//! 32-byte setup seed, proof backend id, directory, record sequence, digest.

use lbcn_core::codec::{Decode, DecodeError, DecodeResult, Decoder, Encoder};
use lbcn_core::drng::{EpochRecord, PublicDirectory};
use lbcn_core::params::SystemParams;
use lbcn_core::proof::sigma::BACKEND_ID;
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 4] = b"LBCN";
pub const FORMAT_VERSION: u16 = 1;
/// Algorithm tag for a SHA-256 trailer.
pub const DIGEST_SHA256: u8 = 1;

const HEADER_LEN: usize = 4 + 2 + 1;
const DIGEST_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct TranscriptFile {
    pub params: SystemParams,
    pub setup_seed: [u8; 32],
    pub backend: String,
    pub directory: PublicDirectory,
    pub records: Vec<EpochRecord>,
}

impl TranscriptFile {
    pub fn new(params: SystemParams, setup_seed: [u8; 32], directory: PublicDirectory, records: Vec<EpochRecord>) -> Self {
        Self {
            params,
            setup_seed,
            backend: BACKEND_ID.to_string(),
            directory,
            records,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        enc.raw(MAGIC);
        enc.u16(FORMAT_VERSION);
        enc.u8(DIGEST_SHA256);
        enc.put(&self.params);
        enc.raw(&self.setup_seed);
        enc.str(&self.backend);
        enc.put(&self.directory);
        enc.seq(&self.records);
        let mut bytes = enc.into_bytes();
        let digest = Sha256::digest(&bytes);
        bytes.extend_from_slice(&digest);
        bytes
    }

    /// Checks magic, version, algorithm tag and digest before touching the
    /// body.
    pub fn decode(bytes: &[u8]) -> DecodeResult<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(DecodeError::BadMagic);
        }
        if bytes.len() < HEADER_LEN + DIGEST_LEN {
            return Err(DecodeError::UnexpectedEnd);
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != FORMAT_VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        if bytes[6] != DIGEST_SHA256 {
            return Err(DecodeError::InvalidTag(bytes[6]));
        }
        let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
        if Sha256::digest(body).as_slice() != digest {
            return Err(DecodeError::DigestMismatch);
        }
        let mut dec = Decoder::new(&body[HEADER_LEN..]);
        let params = SystemParams::decode_standalone(&mut dec)?;
        let cx = params.codec_context();
        let setup_seed = dec.array()?;
        let backend = dec.string()?;
        if backend != BACKEND_ID {
            return Err(DecodeError::Malformed("unknown proof backend"));
        }
        let directory = PublicDirectory::decode(&mut dec, &cx)?;
        let records = dec.seq(&cx)?;
        dec.finish()?;
        Ok(Self {
            params,
            setup_seed,
            backend,
            directory,
            records,
        })
    }
}

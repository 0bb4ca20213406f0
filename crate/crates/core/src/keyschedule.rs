//! Expansion of the 128-bit private key into the per-coefficient bit stream.
//!
//! BLAKE2b tops out at 512 bits, so the 1024-bit digest is built from two
//! domain-separated hashes: `H(key || 0x00) || H(key || 0x01)`. Bits are read
//! most-significant first within each byte and the digest repeats cyclically
//! to any requested length.

use alloc::vec::Vec;
use core::fmt;

use blake2::{Blake2b512, Digest};

use crate::error::{Error, Result};

pub const KEY_BYTES: usize = 16;
pub const DIGEST_BYTES: usize = 128;
pub const DIGEST_BITS: usize = DIGEST_BYTES * 8;
/// Bits per key chunk; one chunk steers one 64-coefficient window.
pub const CHUNK_BITS: usize = 64;
/// Distinct chunks before the expanded stream repeats.
pub const CHUNKS_PER_DIGEST: usize = DIGEST_BITS / CHUNK_BITS;

/// The shared 128-bit secret. `Debug` never prints the key.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey([u8; KEY_BYTES]);

impl SecretKey {
    pub fn new(bytes: [u8; KEY_BYTES]) -> Self {
        Self(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let bytes: [u8; KEY_BYTES] = bytes.try_into().map_err(|_| Error::KeyLength)?;
        Ok(Self(bytes))
    }

    /// Parses exactly 32 hexadecimal characters.
    pub fn from_hex(text: &str) -> Result<Self> {
        let mut bytes = [0u8; KEY_BYTES];
        if text.len() != 2 * KEY_BYTES {
            return Err(Error::KeyHex);
        }
        hex::decode_to_slice(text, &mut bytes).map_err(|_| Error::KeyHex)?;
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8; KEY_BYTES] {
        &self.0
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretKey(<redacted>)")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct KeyDigest([u8; DIGEST_BYTES]);

impl KeyDigest {
    pub fn as_bytes(&self) -> &[u8; DIGEST_BYTES] {
        &self.0
    }

    /// Bit `i` of the cyclically expanded stream.
    pub fn bit(&self, i: usize) -> bool {
        let i = i % DIGEST_BITS;
        (self.0[i / 8] >> (7 - i % 8)) & 1 == 1
    }

    /// The 64 bits `[64 i, 64 i + 64)` of the expanded stream.
    pub fn chunk(&self, i: usize) -> KeyChunk {
        let start = (i % CHUNKS_PER_DIGEST) * 8;
        let mut word = [0u8; 8];
        word.copy_from_slice(&self.0[start..start + 8]);
        KeyChunk(u64::from_be_bytes(word))
    }
}

impl fmt::Debug for KeyDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("KeyDigest(<redacted>)")
    }
}

/// 64 key bits; bit `j` (0-based, stream order) is bit `63 - j` of the word.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct KeyChunk(pub u64);

impl KeyChunk {
    pub const ONES: KeyChunk = KeyChunk(u64::MAX);
    pub const ZEROS: KeyChunk = KeyChunk(0);

    /// Packs a slice of 0/1 values, which must have length exactly 64.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() != CHUNK_BITS {
            return Err(Error::ChunkLength(bits.len()));
        }
        Ok(Self(bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))))
    }

    pub fn bit(self, j: usize) -> bool {
        (self.0 >> (63 - j)) & 1 == 1
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }
}

impl fmt::Debug for KeyChunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("KeyChunk(<redacted>)")
    }
}

pub fn derive_digest(key: &SecretKey) -> KeyDigest {
    let mut out = [0u8; DIGEST_BYTES];
    for (half, tag) in out.chunks_exact_mut(64).zip([0u8, 1u8]) {
        let mut hasher = Blake2b512::new();
        hasher.update(key.0);
        hasher.update([tag]);
        half.copy_from_slice(&hasher.finalize());
    }
    KeyDigest(out)
}

/// The digest repeated cyclically and truncated to `target_len` bits.
pub fn expand_key(digest: &KeyDigest, target_len: usize) -> Vec<bool> {
    (0..target_len).map(|i| digest.bit(i)).collect()
}

/// A key together with its derived digest.
#[derive(Clone, Debug)]
pub struct KeyMaterial {
    key: SecretKey,
    digest: KeyDigest,
}

impl KeyMaterial {
    pub fn new(key: SecretKey) -> Self {
        let digest = derive_digest(&key);
        Self { key, digest }
    }

    pub fn key(&self) -> &SecretKey {
        &self.key
    }

    pub fn digest(&self) -> &KeyDigest {
        &self.digest
    }

    pub fn expanded(&self, target_len: usize) -> Vec<bool> {
        expand_key(&self.digest, target_len)
    }
}

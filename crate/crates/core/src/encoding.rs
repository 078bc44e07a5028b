//! Canonical byte encoding shared by every scheme.
//!
//! A value serializes as a sequence of fields, each prefixed by a 4-byte
//! big-endian length. Integers are written as minimal-length big-endian
//! byte strings (the empty string for zero), so every value has exactly
//! one encoding and byte equality coincides with value equality.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("{0} trailing bytes after the final field")]
    TrailingBytes(usize),
    #[error("integer field has a leading zero byte")]
    NonMinimalInteger,
    #[error("field is not valid UTF-8")]
    InvalidUtf8,
    #[error("integer field does not fit in 64 bits")]
    IntegerOverflow,
}

/// Minimal big-endian byte string for an unsigned integer; empty for zero.
pub fn uint_bytes(n: &BigUint) -> Vec<u8> {
    if n.is_zero() {
        Vec::new()
    } else {
        n.to_bytes_be()
    }
}

/// Builds a canonical field sequence.
#[derive(Default)]
pub struct FieldWriter {
    buf: Vec<u8>,
}

impl FieldWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        let len = u32::try_from(bytes.len()).expect("field longer than u32::MAX");
        self.buf.extend_from_slice(&len.to_be_bytes());
        self.buf.extend_from_slice(bytes);
        self
    }

    pub fn push_str(&mut self, s: &str) -> &mut Self {
        self.push_bytes(s.as_bytes())
    }

    pub fn push_uint(&mut self, n: &BigUint) -> &mut Self {
        let bytes = uint_bytes(n);
        self.push_bytes(&bytes)
    }

    pub fn push_u64(&mut self, n: u64) -> &mut Self {
        self.push_uint(&BigUint::from(n))
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

/// Consumes a canonical field sequence, validating minimality as it goes.
pub struct FieldReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> FieldReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn take_bytes(&mut self) -> Result<&'a [u8], CodecError> {
        let end = self.pos.checked_add(4).ok_or(CodecError::UnexpectedEnd)?;
        if end > self.data.len() {
            return Err(CodecError::UnexpectedEnd);
        }
        let mut len_bytes = [0u8; 4];
        len_bytes.copy_from_slice(&self.data[self.pos..end]);
        let len = u32::from_be_bytes(len_bytes) as usize;
        let field_end = end.checked_add(len).ok_or(CodecError::UnexpectedEnd)?;
        if field_end > self.data.len() {
            return Err(CodecError::UnexpectedEnd);
        }
        let field = &self.data[end..field_end];
        self.pos = field_end;
        Ok(field)
    }

    pub fn take_str(&mut self) -> Result<&'a str, CodecError> {
        let bytes = self.take_bytes()?;
        std::str::from_utf8(bytes).map_err(|_| CodecError::InvalidUtf8)
    }

    pub fn take_uint(&mut self) -> Result<BigUint, CodecError> {
        let bytes = self.take_bytes()?;
        if let Some(&first) = bytes.first() {
            if first == 0 {
                return Err(CodecError::NonMinimalInteger);
            }
        }
        Ok(BigUint::from_bytes_be(bytes))
    }

    pub fn take_u64(&mut self) -> Result<u64, CodecError> {
        let bytes = self.take_bytes()?;
        if let Some(&first) = bytes.first() {
            if first == 0 {
                return Err(CodecError::NonMinimalInteger);
            }
        }
        if bytes.len() > 8 {
            return Err(CodecError::IntegerOverflow);
        }
        Ok(bytes.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b)))
    }

    /// Checks that every byte has been consumed.
    pub fn finish(self) -> Result<(), CodecError> {
        let left = self.data.len() - self.pos;
        if left == 0 {
            Ok(())
        } else {
            Err(CodecError::TrailingBytes(left))
        }
    }
}

//! Append-only deposit journal.
//!
//! Layout: the 8-byte magic `FDOFJNL1`, then records of
//!
//! ```text
//! u32 LE  length of the TriG payload in bytes
//! i64 LE  deposit time, milliseconds since the Unix epoch
//! u8      flags (bit 0: forced deposit)
//! [u8]    TriG payload, UTF-8
//! ```

use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, TimeZone, Utc};

pub const MAGIC: &[u8; 8] = b"FDOFJNL1";
const FLAG_FORCED: u8 = 1;
const HEADER_LEN: usize = 4 + 8 + 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalRecord {
    pub deposited_at: DateTime<Utc>,
    pub forced: bool,
    pub trig: String,
}

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal i/o: {0}")]
    Io(#[from] io::Error),
    #[error("journal corrupt at byte {offset}: {reason}")]
    Corrupt { offset: u64, reason: String },
}

#[derive(Debug)]
pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens or creates the journal and returns it with every stored record.
    pub fn open(path: impl AsRef<Path>) -> Result<(Journal, Vec<JournalRecord>), JournalError> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let len = file.metadata()?.len();
        let records = if len == 0 {
            file.write_all(MAGIC)?;
            file.sync_data()?;
            Vec::new()
        } else {
            read_records(BufReader::new(File::open(&path)?))?
        };
        Ok((Journal { path, file }, records))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &JournalRecord) -> Result<(), JournalError> {
        let payload = record.trig.as_bytes();
        let len = u32::try_from(payload.len())
            .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "deposit larger than 4 GiB"))?;
        let mut buf = Vec::with_capacity(HEADER_LEN + payload.len());
        buf.extend_from_slice(&len.to_le_bytes());
        buf.extend_from_slice(&record.deposited_at.timestamp_millis().to_le_bytes());
        buf.push(if record.forced { FLAG_FORCED } else { 0 });
        buf.extend_from_slice(payload);
        self.file.write_all(&buf)?;
        self.file.sync_data()?;
        Ok(())
    }
}

fn corrupt(offset: u64, reason: impl Into<String>) -> JournalError {
    JournalError::Corrupt {
        offset,
        reason: reason.into(),
    }
}

/// Fills `buf` completely, or reports how many bytes were available.
fn read_full(reader: &mut impl Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match reader.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

pub fn read_records(mut reader: impl Read) -> Result<Vec<JournalRecord>, JournalError> {
    let mut magic = [0u8; 8];
    if read_full(&mut reader, &mut magic)? != 8 || &magic != MAGIC {
        return Err(corrupt(0, "missing journal header"));
    }
    let mut offset = MAGIC.len() as u64;
    let mut records = Vec::new();
    loop {
        let mut header = [0u8; HEADER_LEN];
        match read_full(&mut reader, &mut header)? {
            0 => return Ok(records),
            HEADER_LEN => {}
            _ => return Err(corrupt(offset, "truncated record header")),
        }
        let len = u32::from_le_bytes(header[0..4].try_into().expect("4 bytes")) as usize;
        let millis = i64::from_le_bytes(header[4..12].try_into().expect("8 bytes"));
        let flags = header[12];
        if flags & !FLAG_FORCED != 0 {
            return Err(corrupt(offset, format!("unknown flags {flags:#04x}")));
        }
        let deposited_at = Utc
            .timestamp_millis_opt(millis)
            .single()
            .ok_or_else(|| corrupt(offset, "timestamp out of range"))?;
        let mut payload = vec![0u8; len];
        if read_full(&mut reader, &mut payload)? != len {
            return Err(corrupt(offset, "truncated record payload"));
        }
        let trig = String::from_utf8(payload).map_err(|_| corrupt(offset, "payload is not UTF-8"))?;
        records.push(JournalRecord {
            deposited_at,
            forced: flags & FLAG_FORCED != 0,
            trig,
        });
        offset += (HEADER_LEN + len) as u64;
    }
}

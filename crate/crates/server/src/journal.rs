//! Append-only JSON-lines journal of registrations and debits.
//!
//! Each event is one line, flushed and synced before the mutation it
//! describes becomes visible. A torn final line left by a crash is dropped
//! on open; corruption anywhere else is an error.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use dpverify_core::survey::SampleRecord;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum JournalEvent {
    Register {
        dataset_id: String,
        total_epsilon: f64,
        created_at_ms: u64,
        population_size: usize,
        records: Vec<SampleRecord>,
    },
    Debit {
        dataset_id: String,
        query_id: String,
        epsilon: f64,
        timestamp_ms: u64,
    },
}

#[derive(Debug)]
pub struct Journal {
    file: File,
    path: PathBuf,
}

impl Journal {
    /// Opens or creates the journal and returns the events already in it.
    pub fn open(path: &Path) -> Result<(Self, Vec<JournalEvent>), ServiceError> {
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let mut events = Vec::new();
        let mut good_len = 0u64;
        let mut reader = BufReader::new(&file);
        let mut line = String::new();
        let mut line_no = 0usize;
        loop {
            line.clear();
            let read = reader.read_line(&mut line)?;
            if read == 0 {
                break;
            }
            line_no += 1;
            if !line.ends_with('\n') {
                break;
            }
            let ev = serde_json::from_str::<JournalEvent>(line.trim_end()).map_err(|e| {
                ServiceError::Internal(format!("journal {} line {line_no}: {e}", path.display()))
            })?;
            events.push(ev);
            good_len += read as u64;
        }
        drop(reader);
        if file.metadata()?.len() != good_len {
            file.set_len(good_len)?;
            file.seek(SeekFrom::End(0))?;
        }
        Ok((
            Self {
                file,
                path: path.to_path_buf(),
            },
            events,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Writes one event and syncs it to disk.
    pub fn append(&mut self, event: &JournalEvent) -> Result<(), ServiceError> {
        let mut line =
            serde_json::to_vec(event).map_err(|e| ServiceError::Internal(e.to_string()))?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}

//   Copyright 2026 relu-unwrap developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Thread-pool task runner for the decomposition searches.

use rayon::prelude::*;
use relu_unwrap_core::TaskRunner;

use crate::error::{Error, Result};

/// Environment variable that overrides any requested thread count.
pub const THREADS_ENV: &str = "RELU_UNWRAP_THREADS";

/// Runs tasks on a dedicated rayon pool. Results keep input order.
pub struct RayonRunner {
    pool: rayon::ThreadPool,
}

impl RayonRunner {
    /// `threads = None` uses every available core.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let from_env = match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(THREADS_ENV, format!("not a thread count: {v:?}")))?,
            ),
            Err(_) => None,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(from_env.or(threads).unwrap_or(0))
            .build()
            .map_err(|e| Error::invalid("thread pool", e))?;
        Ok(RayonRunner { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TaskRunner for RayonRunner {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

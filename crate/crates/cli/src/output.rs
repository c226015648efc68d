// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and companion plotting-script writers.

use std::path::{Path, PathBuf};

use crate::CliResult;

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Python/matplotlib script plotting `y_cols` against the first column.
pub fn write_plot_script(path: &Path, csv: &Path, title: &str, log_y: bool) -> CliResult<()> {
    let csv_name = csv.display().to_string().replace('\\', "\\\\").replace('\'', "\\'");
    let scale = if log_y { "ax.set_yscale('log')\n" } else { "" };
    let text = format!(
        "import csv\n\
         import matplotlib.pyplot as plt\n\
         \n\
         with open('{csv_name}', newline='') as fh:\n    \
             rows = list(csv.reader(fh))\n\
         header, data = rows[0], rows[1:]\n\
         x = [float(r[0]) for r in data]\n\
         fig, ax = plt.subplots()\n\
         for k in range(1, len(header)):\n    \
             try:\n        \
                 ax.plot(x, [float(r[k]) for r in data], label=header[k])\n    \
             except ValueError:\n        \
                 continue\n\
         {scale}\
         ax.set_xlabel(header[0])\n\
         ax.set_title('{title}')\n\
         ax.legend()\n\
         fig.savefig('{csv_name}'.rsplit('.', 1)[0] + '.png', dpi=150)\n"
    );
    std::fs::write(path, text)?;
    Ok(())
}

/// `trace.csv` -> `trace.peaks.csv`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

pub fn ghz(hz: f64) -> String {
    format!("{:.9}", hz / 1e9)
}

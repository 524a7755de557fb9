use std::io::{Read, Write};
use std::path::Path;

use super::{ColumnData, ColumnKind, Table, TableSchema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Undeclared categorical values become missing instead of failing.
    pub lenient: bool,
}

impl Table {
    pub fn load_csv(path: impl AsRef<Path>, schema: &TableSchema) -> Result<Table> {
        Self::load_csv_with(path, schema, LoadOptions::default())
    }

    pub fn load_csv_with(
        path: impl AsRef<Path>,
        schema: &TableSchema,
        options: LoadOptions,
    ) -> Result<Table> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file, schema, options)
    }

    /// Reads comma-separated UTF-8 with a header row. Output columns follow
    /// schema order regardless of header order.
    pub fn read_csv<R: Read>(reader: R, schema: &TableSchema, options: LoadOptions) -> Result<Table> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();

        // header position for each schema column
        let mut positions = Vec::with_capacity(schema.len());
        let mut missing = Vec::new();
        for decl in schema.columns() {
            match headers.iter().position(|h| decl.answers_to(h.trim())) {
                Some(p) => positions.push(p),
                None => missing.push(decl.name.clone()),
            }
        }
        let extra: Vec<String> = headers
            .iter()
            .filter(|h| !schema.columns().iter().any(|c| c.answers_to(h.trim())))
            .map(str::to_string)
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Error::SchemaMismatch { missing, extra });
        }

        let mut columns: Vec<ColumnData> = schema
            .columns()
            .iter()
            .map(|c| match c.kind {
                ColumnKind::Numeric => ColumnData::Numeric(Vec::new()),
                ColumnKind::Categorical => ColumnData::Categorical(Vec::new()),
            })
            .collect();

        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            for ((decl, &pos), column) in schema.columns().iter().zip(&positions).zip(&mut columns) {
                let raw = record.get(pos).unwrap_or("");
                let trimmed = raw.trim();
                let is_null = schema.is_null(raw) || schema.is_null(trimmed);
                match column {
                    ColumnData::Numeric(cells) => {
                        if is_null {
                            cells.push(None);
                        } else {
                            let v: f64 = trimmed.parse().map_err(|_| Error::Parse {
                                row,
                                column: decl.name.clone(),
                                value: raw.to_string(),
                            })?;
                            cells.push(Some(v));
                        }
                    }
                    ColumnData::Categorical(cells) => {
                        if is_null {
                            cells.push(None);
                        } else if !decl.declared_values.is_empty()
                            && !decl.declared_values.iter().any(|d| d == raw)
                        {
                            if options.lenient {
                                cells.push(None);
                            } else {
                                return Err(Error::UndeclaredCategory {
                                    row,
                                    column: decl.name.clone(),
                                    value: raw.to_string(),
                                });
                            }
                        } else {
                            cells.push(Some(raw.to_string()));
                        }
                    }
                }
            }
        }
        Table::new(schema.clone(), columns)
    }

    /// Writes the table with canonical column names; missing cells are
    /// written as empty fields.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(self.column_names())?;
        let mut record: Vec<String> = Vec::with_capacity(self.n_columns());
        for row in 0..self.n_rows() {
            record.clear();
            for (_, data) in self.columns() {
                record.push(match data {
                    ColumnData::Numeric(v) => v[row].map(|x| x.to_string()).unwrap_or_default(),
                    ColumnData::Categorical(v) => v[row].clone().unwrap_or_default(),
                });
            }
            wtr.write_record(&record)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

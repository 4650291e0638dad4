#pragma once

#include <string>

#include "dataset.hpp"
#include "trainer.hpp"

namespace mssvdd {

// Container layout (all little-endian): magic "MSVD", u32 format version,
// u64 payload size, u32 CRC-32 of the payload, then the payload. Matrices are
// u64 rows, u64 cols, then column-major f64 entries.
inline constexpr uint32_t kModelFormatVersion = 1;

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

/// Same container, "MSVDds" payload tag; round-trips a dataset bit-exactly.
void save_dataset(const ModalDataset& data, const std::string& path);
ModalDataset load_dataset(const std::string& path);

uint32_t crc32(const void* data, size_t len);

}  // namespace mssvdd

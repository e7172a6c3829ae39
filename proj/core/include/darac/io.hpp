#ifndef DARAC_IO_HPP
#define DARAC_IO_HPP

#include <string>
#include <vector>

#include "darac/eval.hpp"
#include "darac/head.hpp"
#include "darac/postprocess.hpp"
#include "darac/tensor.hpp"
#include "darac/training.hpp"

namespace darac {

/// Named descriptor rows as stored on disk: a binary file (magic "DRCF1",
/// u32 count, u32 dim, float32 payload) plus a "<path>.names" text manifest
/// with one name per row.
struct DescriptorSet {
    std::vector<std::string> names;
    std::vector<Vector> descriptors;
};

void write_descriptor_file(const std::string& path, const DescriptorSet& set);
DescriptorSet read_descriptor_file(const std::string& path);

/// Head checkpoint: magic "DRCH1", header lines "L_head=", "C=", then the
/// learnable arrays and running stats as float64 little-endian.
void save_head_checkpoint(const std::string& path, const HeadParams& params);
HeadParams load_head_checkpoint(const std::string& path);

/// Whitening model: magic "DRCW1", header lines "C=", "fit_count=", then
/// mean and row-major projection as float64 little-endian.
void save_whitening_model(const std::string& path, const WhiteningModel& model);
WhiteningModel load_whitening_model(const std::string& path);

/// Labeled dataset: magic "DRCD1", header lines "count=", "C=", "H=", "W=",
/// then one "name<TAB>label" line per item, then all feature values as
/// float64 little-endian in item order.
void save_dataset(const std::string& path, const LabeledDataset& ds);
LabeledDataset load_dataset(const std::string& path);

/// Ground truth: one query per line, "query<TAB>pos1,pos2[<TAB>junk1,...]".
void save_query_protocol(const std::string& path, const QueryProtocol& protocol);
QueryProtocol load_query_protocol(const std::string& path);

/// Training configuration as "key=value" lines ('#' starts a comment).
void save_training_config(const std::string& path, const TrainingConfig& cfg);
TrainingConfig load_training_config(const std::string& path);

} // namespace darac

#endif // DARAC_IO_HPP

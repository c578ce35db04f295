#include "cremona3/quadmap.hpp"

namespace cr3 {

namespace {

BatchItem classify_one(const QuadMap& m) {
  BatchItem it;
  try {
    it.report = classify(m);
  } catch (const NotBidegree22& e) {
    it.status = BatchItem::Status::NotBidegree22;
    it.error = e.what();
  } catch (const AmbiguousH& e) {
    it.status = BatchItem::Status::Internal;
    it.error = e.what();
  } catch (const NoRationalNormalForm& e) {
    it.status = BatchItem::Status::Internal;
    it.error = e.what();
  } catch (const std::invalid_argument& e) {
    it.status = BatchItem::Status::Degenerate;
    it.error = e.what();
  }
  return it;
}

}  // namespace

std::vector<BatchItem> classify_batch_serial(const std::vector<QuadMap>& maps) {
  std::vector<BatchItem> out;
  out.reserve(maps.size());
  for (const auto& m : maps) out.push_back(classify_one(m));
  return out;
}

std::vector<BatchItem> classify_batch(const std::vector<QuadMap>& maps) {
  std::vector<BatchItem> out(maps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < (long)maps.size(); ++i) out[i] = classify_one(maps[i]);
  return out;
}

}  // namespace cr3

#include "vectors.hpp"

#include <cstdint>
#include <vector>

#include "hash.hpp"
#include "json.hpp"

namespace qhfmp {

namespace {

using Json = nlohmann::ordered_json;

Json vector_entry(const char* label, const std::vector<uint8_t>& input, const HashParams& params) {
  Json j;
  j["label"] = label;
  j["input_bytes"] = input.size();
  j["digest_hex"] = hash_bytes(input, params).hex();
  return j;
}

}  // namespace

std::string canonical_vectors_json() {
  Json root;
  root["schema_version"] = 1;
  root["description"] = "Reference digests for the QHFM-P hash family.";
  root["encoding"] =
      "Text inputs are UTF-8 bytes; each byte expands to bits most-significant-bit first; "
      "the walk consumes bits in byte order.";
  Json instances = Json::array();
  for (const char* name : {"QHFM-P-296", "QHFM-P-264"}) {
    const HashParams params = standard_instance(name);
    Json inst;
    inst["params"] = Json::parse(params_to_json(params, name));
    inst["digest_bits"] = params.digest_bits();
    inst["digest_bytes"] = params.digest_bytes();
    Json vectors = Json::array();
    vectors.push_back(vector_entry("empty", {}, params));
    vectors.push_back(vector_entry("abc", {0x61, 0x62, 0x63}, params));
    vectors.push_back(vector_entry("1KiB of 0x00", std::vector<uint8_t>(1024, 0x00), params));
    vectors.push_back(vector_entry("1KiB of 0xFF", std::vector<uint8_t>(1024, 0xFF), params));
    inst["vectors"] = vectors;
    instances.push_back(inst);
  }
  root["instances"] = instances;
  return root.dump(2) + "\n";
}

}  // namespace qhfmp

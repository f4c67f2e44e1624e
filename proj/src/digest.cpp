#include "amrt/model.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>

namespace amrt {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((v >> (i * 8)) & 0xff));
}

void put_str(std::vector<std::uint8_t>& out, const std::string& s) {
    put_u64(out, s.size());
    out.insert(out.end(), s.begin(), s.end());
}

void put_scalar(std::vector<std::uint8_t>& out, const Scalar& v) {
    out.push_back(static_cast<std::uint8_t>(v.index()));
    switch (v.index()) {
        case 0: put_u64(out, static_cast<std::uint64_t>(std::get<std::int64_t>(v))); break;
        case 1: put_u64(out, std::bit_cast<std::uint64_t>(std::get<double>(v))); break;
        case 2: put_str(out, std::get<std::string>(v)); break;
        case 3: out.push_back(std::get<bool>(v) ? 1 : 0); break;
    }
}

} // namespace

std::vector<std::uint8_t> canonical_bytes(const ReflectionModel& model) {
    std::vector<std::uint8_t> out;
    out.reserve(256);
    // maps iterate in key order, which is the canonical order
    put_u64(out, model.nodes().size());
    for (const auto& [id, n] : model.nodes()) {
        put_str(out, id);
        put_str(out, n.type);
        put_u64(out, n.attrs.size());
        for (const auto& [name, v] : n.attrs) {
            put_str(out, name);
            put_scalar(out, v);
        }
    }
    put_u64(out, model.edges().size());
    for (const auto& [id, e] : model.edges()) {
        put_str(out, id);
        put_str(out, e.type);
        put_str(out, e.src);
        put_str(out, e.tgt);
    }
    return out;
}

std::string snapshot_digest(const ReflectionModel& model) {
    auto bytes = canonical_bytes(model);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(md_len * 2);
    for (unsigned int i = 0; i < md_len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

} // namespace amrt

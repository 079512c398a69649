#include "chronomix/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "chronomix/errors.hpp"

namespace chronomix {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    // %.17g round-trips but is noisy; try increasing precision until the
    // value parses back exactly.
    for (int prec = 12; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path);
    out << contents;
    if (!out.good()) throw IoFailure("write failed for " + path);
}

}  // namespace chronomix

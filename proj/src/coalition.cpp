#include "tc/coalition.hpp"

#include <stdexcept>

namespace tc {

std::string to_string(Coalition m) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if (!m.contains(i)) continue;
        if (!first) out += ',';
        out += std::to_string(i + 1);
        first = false;
    }
    out += '}';
    return out;
}

std::string to_mask_literal(Coalition m, int n) {
    std::string out = "0b";
    for (int i = n - 1; i >= 0; --i) out += m.contains(i) ? '1' : '0';
    return out;
}

Coalition coalition_from_mask_literal(const std::string& text) {
    if (text.size() < 3 || text[0] != '0' || text[1] != 'b') {
        throw std::invalid_argument("coalition mask must look like \"0b101\", got \"" + text + "\"");
    }
    std::uint32_t bits = 0;
    for (std::size_t k = 2; k < text.size(); ++k) {
        if (text[k] != '0' && text[k] != '1') {
            throw std::invalid_argument("coalition mask has non-binary digit: \"" + text + "\"");
        }
        bits = (bits << 1) | static_cast<std::uint32_t>(text[k] - '0');
    }
    return {bits};
}

}  // namespace tc

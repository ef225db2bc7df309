#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef CMBP_FIXTURE_DIR
#error "CMBP_FIXTURE_DIR must name the fixture directory"
#endif

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(CMBP_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace testsupport

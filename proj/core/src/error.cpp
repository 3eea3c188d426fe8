#include "fga/error.hpp"

namespace fga {

void throw_invalid(const std::string& what) { throw InvalidArgument(what); }

}  // namespace fga

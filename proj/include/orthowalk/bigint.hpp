#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace orthowalk {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace orthowalk

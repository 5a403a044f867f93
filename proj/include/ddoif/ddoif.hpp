#pragma once

#include "ddoif/container.hpp"
#include "ddoif/crc32.hpp"
#include "ddoif/descriptor.hpp"
#include "ddoif/dictionary.hpp"
#include "ddoif/errors.hpp"
#include "ddoif/format.hpp"

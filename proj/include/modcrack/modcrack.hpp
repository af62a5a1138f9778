#pragma once

#include "modcrack/attack.hpp"
#include "modcrack/dtf_checks.hpp"
#include "modcrack/cipher.hpp"
#include "modcrack/demo.hpp"
#include "modcrack/errors.hpp"
#include "modcrack/image_io.hpp"
#include "modcrack/keystream.hpp"
#include "modcrack/mod_image.hpp"
#include "modcrack/oracle.hpp"
#include "modcrack/permutation.hpp"
#include "modcrack/serialize.hpp"
#include "modcrack/substitution.hpp"

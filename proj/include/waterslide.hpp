#pragma once

#include "waterslide/asymptotics.hpp"
#include "waterslide/bounds.hpp"
#include "waterslide/channels.hpp"
#include "waterslide/classical.hpp"
#include "waterslide/cli.hpp"
#include "waterslide/errors.hpp"
#include "waterslide/numerics.hpp"
#include "waterslide/optimizer.hpp"

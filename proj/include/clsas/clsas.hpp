#pragma once

#include "clsas/affinization.hpp"
#include "clsas/classifier.hpp"
#include "clsas/spec_io.hpp"
#include "clsas/structures.hpp"
#include "clsas/verifier.hpp"

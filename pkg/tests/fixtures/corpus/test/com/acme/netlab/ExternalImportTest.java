package com.acme.netlab.tests;

import java.util.ArrayList;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class ExternalImportTest {

    public void collectNames() {
        TestBegin("Collect names in external list");
        ArrayList<String> names = new ArrayList<String>();
        names.add("du1");
        Log.info("collected");
        TestEnd();
    }

    public void emptyStep() {
        TestBegin("Empty step does nothing");
        TestEnd();
    }
}
